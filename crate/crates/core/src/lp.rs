//! Exact phase-1 revised simplex with column generation.
//!
//! Solves `sum_j lambda_j a_j = b, lambda >= 0` where columns come from a
//! pricing oracle. The basis inverse is kept fraction-free over `i128`
//! (B⁻¹ = N/D with integer N and D) while entries fit, and as explicit
//! rationals afterwards.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, one, zero, Rational};

/// Degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Var {
    Artificial(usize),
    Column(usize),
}

/// A generated column with an attached payload.
pub struct Priced<P> {
    pub column: Vec<Rational>,
    pub payload: P,
}

/// B⁻¹ = n/d and x_B = x/(d·scale), with b·scale integral.
struct Fractionless {
    n: Vec<Vec<i128>>,
    d: i128,
    x: Vec<i128>,
    scale: BigInt,
}

enum Inverse {
    Int(Fractionless),
    Rat { binv: Vec<Vec<Rational>>, xb: Vec<Rational> },
}

pub struct ColumnGen<P> {
    rows: usize,
    b: Vec<Rational>,
    inv: Inverse,
    basis: Vec<Var>,
    pool: Vec<Priced<P>>,
    int_cols: Vec<Option<Vec<i128>>>,
    in_basis: Vec<bool>,
    pub max_iterations: usize,
}

pub struct Solution<'a, P> {
    pub terms: Vec<(Rational, &'a P)>,
}

fn small(r: &Rational) -> Option<i128> {
    if r.denom().is_one() {
        r.numer().to_i128()
    } else {
        None
    }
}

fn identity(rows: usize) -> Vec<Vec<Rational>> {
    let mut binv = vec![vec![zero(); rows]; rows];
    for (i, row) in binv.iter_mut().enumerate() {
        row[i] = one();
    }
    binv
}

impl Fractionless {
    fn new(b: &[Rational]) -> Option<Self> {
        let scale = b.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let x = b.iter().map(|v| (v.numer() * (&scale / v.denom())).to_i128()).collect::<Option<Vec<_>>>()?;
        let rows = b.len();
        let n = (0..rows).map(|i| (0..rows).map(|k| i128::from(i == k)).collect()).collect();
        Some(Fractionless { n, d: 1, x, scale })
    }

    fn ratio(&self, v: i128) -> Rational {
        Rational::new(BigInt::from(v), BigInt::from(self.d))
    }

    fn to_rational(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let binv = self.n.iter().map(|row| row.iter().map(|&v| self.ratio(v)).collect()).collect();
        let den = BigInt::from(self.d) * &self.scale;
        let xb = self.x.iter().map(|&v| Rational::new(BigInt::from(v), den.clone())).collect();
        (binv, xb)
    }

    fn column(&self, a: &[i128]) -> Option<Vec<i128>> {
        self.n
            .iter()
            .map(|row| row.iter().zip(a).filter(|(_, &ak)| ak != 0).try_fold(0i128, |acc, (&v, &ak)| acc.checked_add(v.checked_mul(ak)?)))
            .collect()
    }

    /// Pivots on row r with entering column δ = N a; `None` on overflow.
    fn pivot(&self, r: usize, delta: &[i128]) -> Option<Fractionless> {
        let p = delta[r];
        let upd = |own: i128, di: i128, other: i128| -> Option<i128> {
            let num = p.checked_mul(own)?.checked_sub(di.checked_mul(other)?)?;
            debug_assert_eq!(num % self.d, 0);
            Some(num / self.d)
        };
        let rows = self.n.len();
        let mut n = Vec::with_capacity(rows);
        let mut x = Vec::with_capacity(rows);
        for i in 0..rows {
            if i == r {
                n.push(self.n[r].clone());
                x.push(self.x[r]);
            } else {
                let row = (0..rows).map(|k| upd(self.n[i][k], delta[i], self.n[r][k])).collect::<Option<Vec<_>>>()?;
                n.push(row);
                x.push(upd(self.x[i], delta[i], self.x[r])?);
            }
        }
        Some(Fractionless { n, d: p, x, scale: self.scale.clone() })
    }
}

impl<P> ColumnGen<P> {
    /// `b` must be nonnegative.
    pub fn new(b: Vec<Rational>) -> Self {
        let rows = b.len();
        let inv = match Fractionless::new(&b) {
            Some(f) => Inverse::Int(f),
            None => Inverse::Rat { binv: identity(rows), xb: b.clone() },
        };
        ColumnGen {
            rows,
            b,
            inv,
            basis: (0..rows).map(Var::Artificial).collect(),
            pool: Vec::new(),
            int_cols: Vec::new(),
            in_basis: Vec::new(),
            max_iterations: 100_000,
        }
    }

    pub fn add_column(&mut self, column: Vec<Rational>, payload: P) {
        assert_eq!(column.len(), self.rows);
        self.int_cols.push(column.iter().map(small).collect());
        self.pool.push(Priced { column, payload });
        self.in_basis.push(false);
    }

    fn switch_to_rational(&mut self) {
        if let Inverse::Int(f) = &self.inv {
            let (binv, xb) = f.to_rational();
            self.inv = Inverse::Rat { binv, xb };
        }
    }

    fn xb(&self) -> Vec<Rational> {
        match &self.inv {
            Inverse::Int(f) => {
                let den = BigInt::from(f.d) * &f.scale;
                f.x.iter().map(|&v| Rational::new(BigInt::from(v), den.clone())).collect()
            }
            Inverse::Rat { xb, .. } => xb.clone(),
        }
    }

    fn objective(&self) -> Rational {
        let artificial = |i: &usize| matches!(self.basis[*i], Var::Artificial(_));
        match &self.inv {
            Inverse::Int(f) => {
                let sum: BigInt = (0..self.rows).filter(artificial).map(|i| BigInt::from(f.x[i])).sum();
                Rational::new(sum, BigInt::from(f.d) * &f.scale)
            }
            Inverse::Rat { xb, .. } => (0..self.rows).filter(artificial).fold(zero(), |acc, i| acc + &xb[i]),
        }
    }

    /// Phase-1 duals: the sum of the rows of B⁻¹ at artificial positions.
    fn duals(&self) -> Vec<Rational> {
        match &self.inv {
            Inverse::Int(f) => match self.int_duals(f) {
                Some(y) => y.into_iter().map(|v| f.ratio(v)).collect(),
                None => {
                    let (binv, _) = f.to_rational();
                    self.rat_duals(&binv)
                }
            },
            Inverse::Rat { binv, .. } => self.rat_duals(binv),
        }
    }

    fn rat_duals(&self, binv: &[Vec<Rational>]) -> Vec<Rational> {
        let mut y = vec![zero(); self.rows];
        for (i, v) in self.basis.iter().enumerate() {
            if matches!(v, Var::Artificial(_)) {
                for (k, yk) in y.iter_mut().enumerate() {
                    *yk += &binv[i][k];
                }
            }
        }
        y
    }

    /// Numerators of the duals over `f.d`.
    fn int_duals(&self, f: &Fractionless) -> Option<Vec<i128>> {
        let mut y = vec![0i128; self.rows];
        for (i, v) in self.basis.iter().enumerate() {
            if matches!(v, Var::Artificial(_)) {
                for (k, yk) in y.iter_mut().enumerate() {
                    *yk = yk.checked_add(f.n[i][k])?;
                }
            }
        }
        Some(y)
    }

    fn dot(y: &[Rational], a: &[Rational]) -> Rational {
        y.iter()
            .zip(a)
            .filter(|(_, ak)| !ak.is_zero())
            .fold(zero(), |acc, (yk, ak)| acc + yk * ak)
    }

    /// Pool column with the largest positive reduced cost, or the first one
    /// under Bland's rule.
    fn pick_from_pool(&self, y: &[Rational], bland: bool) -> Option<usize> {
        if let Inverse::Int(f) = &self.inv {
            if let Some(yi) = self.int_duals(f) {
                let sign = f.d.signum();
                let mut best: Option<(usize, i128)> = None;
                let mut exact = true;
                for j in (0..self.pool.len()).filter(|&j| !self.in_basis[j]) {
                    let Some(a) = &self.int_cols[j] else {
                        exact = false;
                        break;
                    };
                    let r = yi.iter().zip(a).filter(|(_, &ak)| ak != 0).try_fold(0i128, |acc, (&v, &ak)| acc.checked_add(v.checked_mul(ak)?));
                    let Some(r) = r.and_then(|r| r.checked_mul(sign)) else {
                        exact = false;
                        break;
                    };
                    if r > 0 && best.is_none_or(|(_, b)| r > b) {
                        best = Some((j, r));
                        if bland {
                            break;
                        }
                    }
                }
                if exact {
                    return best.map(|(j, _)| j);
                }
            }
        }
        let mut best: Option<(usize, Rational)> = None;
        for j in (0..self.pool.len()).filter(|&j| !self.in_basis[j]) {
            let r = Self::dot(y, &self.pool[j].column);
            if r.is_positive() && best.as_ref().is_none_or(|(_, b)| r > *b) {
                best = Some((j, r));
                if bland {
                    break;
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn pivot_in(&mut self, j: usize) -> Result<()> {
        if let (Inverse::Int(f), Some(a)) = (&self.inv, &self.int_cols[j]) {
            if let Some(delta) = f.column(a) {
                let sign = f.d.signum();
                let mut leave: Option<(usize, Rational)> = None;
                for i in 0..self.rows {
                    if delta[i].signum() == sign && delta[i] != 0 {
                        let ratio = Rational::new(BigInt::from(f.x[i]), BigInt::from(delta[i]));
                        if leave.as_ref().is_none_or(|(l, r)| ratio < *r || (ratio == *r && self.basis[i] < self.basis[*l])) {
                            leave = Some((i, ratio));
                        }
                    }
                }
                let (r, _) = leave.ok_or_else(|| Error::Internal("unbounded phase-1 direction".into()))?;
                if let Some(next) = f.pivot(r, &delta) {
                    self.inv = Inverse::Int(next);
                    self.enter(r, j);
                    return Ok(());
                }
            }
        }
        self.switch_to_rational();
        let Inverse::Rat { binv, xb } = &mut self.inv else { unreachable!() };
        let a = &self.pool[j].column;
        let d: Vec<Rational> = (0..self.rows).map(|i| Self::dot(&binv[i], a)).collect();
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..self.rows {
            if d[i].is_positive() {
                let ratio = &xb[i] / &d[i];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.ok_or_else(|| Error::Internal("unbounded phase-1 direction".into()))?;
        let piv = d[r].clone();
        let pivot_row: Vec<Rational> = binv[r].iter().map(|v| v / &piv).collect();
        let xr = &xb[r] / &piv;
        for i in 0..self.rows {
            if i == r || d[i].is_zero() {
                continue;
            }
            let f = d[i].clone();
            for k in 0..self.rows {
                if !pivot_row[k].is_zero() {
                    let delta = &f * &pivot_row[k];
                    binv[i][k] -= delta;
                }
            }
            let dx = &f * &xr;
            xb[i] -= dx;
        }
        binv[r] = pivot_row;
        xb[r] = xr;
        self.enter(r, j);
        Ok(())
    }

    fn enter(&mut self, r: usize, j: usize) {
        if let Var::Column(old) = self.basis[r] {
            self.in_basis[old] = false;
        }
        self.basis[r] = Var::Column(j);
        self.in_basis[j] = true;
    }

    /// Runs to feasibility. `oracle(y)` must return a column maximizing
    /// `y . a` over the whole family (or `None` if the family is empty).
    pub fn solve(
        &mut self,
        mut oracle: impl FnMut(&[Rational]) -> Result<Option<Priced<P>>>,
    ) -> Result<Solution<'_, P>> {
        let mut iterations = 0;
        let mut stalled = 0;
        let mut last = self.objective();
        while !last.is_zero() {
            iterations += 1;
            if iterations > self.max_iterations {
                return Err(Error::Internal("column generation iteration limit".into()));
            }
            let y = self.duals();
            // largest reduced cost, or Bland's rule after a long degenerate run
            let j = match self.pick_from_pool(&y, stalled > STALL_LIMIT) {
                Some(j) => j,
                None => match oracle(&y)? {
                    Some(p) if Self::dot(&y, &p.column).is_positive() => {
                        self.add_column(p.column, p.payload);
                        self.pool.len() - 1
                    }
                    _ => {
                        let witness: Vec<String> = y.iter().map(fmt_rat).collect();
                        return Err(Error::Infeasible(format!(
                            "phase-1 optimum {} > 0; separating duals [{}]",
                            fmt_rat(&Self::dot(&y, &self.b)),
                            witness.join(", ")
                        )));
                    }
                },
            };
            self.pivot_in(j)?;
            let now = self.objective();
            stalled = if now < last { 0 } else { stalled + 1 };
            last = now;
        }
        let xb = self.xb();
        let mut terms = Vec::new();
        for (i, v) in self.basis.iter().enumerate() {
            if let Var::Column(j) = v {
                if xb[i].is_positive() {
                    terms.push((xb[i].clone(), &self.pool[*j].payload));
                }
            }
        }
        Ok(Solution { terms })
    }
}
