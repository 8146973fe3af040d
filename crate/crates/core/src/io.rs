//! Text formats for instances, vectors and convex combinations.
//!
//! Instance: `n m θ_num θ_den` then m lines `u v num den`. A plain graph
//! has θ_den = 0 and edge lines `u v` (values optional). Combination:
//! `n k` then per term `λ_num λ_den m_i` and m_i lines `u v mult`. Vector:
//! `m` then m lines `num den`. Lines starting with `#` are comments.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclic::{validate_cyclic, CyclicPoint};
use crate::error::{Error, Result};
use crate::graph::{ConvexCombination, EdgeVector, Graph, Multigraph};
use crate::rational::{from_parts, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub theta: Option<Rational>,
    pub x: Option<EdgeVector>,
}

impl Instance {
    pub fn cyclic(p: &CyclicPoint) -> Self {
        Instance { graph: p.graph.clone(), theta: Some(p.theta.clone()), x: Some(p.x.clone()) }
    }

    pub fn plain(graph: Graph) -> Self {
        Instance { graph, theta: None, x: None }
    }

    pub fn to_cyclic(&self) -> Result<CyclicPoint> {
        match (&self.theta, &self.x) {
            (Some(t), Some(x)) => validate_cyclic(t, &self.graph, x),
            _ => Err(Error::Input("instance carries no theta; not a cyclic point".into())),
        }
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
}

fn num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Input(format!("line {line}: cannot parse {tok:?}")))
}

fn ratio(n: &str, d: &str, line: usize) -> Result<Rational> {
    let n: BigInt = num(n, line)?;
    let d: BigInt = num(d, line)?;
    from_parts(&n, &d).map_err(|_| Error::Input(format!("line {line}: zero denominator")))
}

fn expect_len(toks: &[&str], allowed: &[usize], line: usize) -> Result<()> {
    if allowed.contains(&toks.len()) {
        Ok(())
    } else {
        Err(Error::Input(format!("line {line}: expected {allowed:?} fields, got {}", toks.len())))
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut it = lines(text);
    let (l, head) = it.next().ok_or_else(|| Error::Input("empty instance".into()))?;
    expect_len(&head, &[2, 4], l)?;
    let n: usize = num(head[0], l)?;
    let m: usize = num(head[1], l)?;
    let theta = if head.len() == 4 && head[3] != "0" { Some(ratio(head[2], head[3], l)?) } else { None };
    let mut edges = Vec::with_capacity(m);
    let mut values = Vec::with_capacity(m);
    for _ in 0..m {
        let (l, t) = it.next().ok_or_else(|| Error::Input(format!("expected {m} edge lines")))?;
        expect_len(&t, &[2, 4], l)?;
        edges.push((num(t[0], l)?, num(t[1], l)?));
        if t.len() == 4 {
            values.push(ratio(t[2], t[3], l)?);
        }
    }
    if let Some((l, _)) = it.next() {
        return Err(Error::Input(format!("line {l}: trailing data")));
    }
    let graph = Graph::new(n, edges)?;
    let x = match values.len() {
        0 => None,
        k if k == m => Some(EdgeVector(values)),
        _ => return Err(Error::Input("some edges have values and some do not".into())),
    };
    if theta.is_some() && x.is_none() {
        return Err(Error::Input("theta given without edge values".into()));
    }
    Ok(Instance { graph, theta, x })
}

pub fn write_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut s = String::new();
    match &inst.theta {
        Some(t) => writeln!(s, "{} {} {} {}", g.n(), g.m(), t.numer(), t.denom()),
        None => writeln!(s, "{} {} 0 0", g.n(), g.m()),
    }
    .unwrap();
    for e in 0..g.m() {
        let (u, v) = g.edge(e);
        match &inst.x {
            Some(x) => writeln!(s, "{u} {v} {} {}", x.get(e).numer(), x.get(e).denom()),
            None => writeln!(s, "{u} {v}"),
        }
        .unwrap();
    }
    s
}

/// Host edge for (u, v) not yet used in the current term, in host order.
fn locate(g: &Graph, u: usize, v: usize, used: &[bool]) -> Option<usize> {
    (0..g.m()).find(|&e| {
        let (a, b) = g.edge(e);
        !used[e] && ((a, b) == (u, v) || (a, b) == (v, u))
    })
}

pub fn parse_combination(text: &str, g: &Graph) -> Result<ConvexCombination> {
    let mut it = lines(text);
    let (l, head) = it.next().ok_or_else(|| Error::Input("empty combination".into()))?;
    expect_len(&head, &[2], l)?;
    let n: usize = num(head[0], l)?;
    let k: usize = num(head[1], l)?;
    if n != g.n() {
        return Err(Error::Input(format!("combination has n = {n}, instance has {}", g.n())));
    }
    let mut terms = Vec::with_capacity(k);
    for _ in 0..k {
        let (l, t) = it.next().ok_or_else(|| Error::Input(format!("expected {k} terms")))?;
        expect_len(&t, &[3], l)?;
        let lam = ratio(t[0], t[1], l)?;
        let mi: usize = num(t[2], l)?;
        let mut f = Multigraph::empty(g.m());
        let mut used = vec![false; g.m()];
        for _ in 0..mi {
            let (l, t) = it.next().ok_or_else(|| Error::Input("truncated term".into()))?;
            expect_len(&t, &[3], l)?;
            let (u, v, c): (usize, usize, u32) = (num(t[0], l)?, num(t[1], l)?, num(t[2], l)?);
            let e = locate(g, u, v, &used).ok_or_else(|| Error::Input(format!("line {l}: no edge {u} {v} in the instance")))?;
            used[e] = true;
            f.mult[e] = c;
        }
        terms.push((lam, f));
    }
    if let Some((l, _)) = it.next() {
        return Err(Error::Input(format!("line {l}: trailing data")));
    }
    Ok(ConvexCombination::new(terms))
}

/// Terms in canonical order: descending multiplier, then edge list.
pub fn write_combination(c: &ConvexCombination, g: &Graph) -> String {
    let mut terms: Vec<(&Rational, Vec<(usize, usize, u32)>)> = c.terms.iter().map(|(l, f)| (l, f.edge_list(g))).collect();
    terms.sort_by(|a, b| b.0.cmp(a.0).then_with(|| a.1.cmp(&b.1)));
    let mut s = String::new();
    writeln!(s, "{} {}", g.n(), terms.len()).unwrap();
    for (l, edges) in terms {
        writeln!(s, "{} {} {}", l.numer(), l.denom(), edges.len()).unwrap();
        for (u, v, k) in edges {
            writeln!(s, "{u} {v} {k}").unwrap();
        }
    }
    s
}

pub fn parse_vector(text: &str) -> Result<EdgeVector> {
    let mut it = lines(text);
    let (l, head) = it.next().ok_or_else(|| Error::Input("empty vector".into()))?;
    expect_len(&head, &[1], l)?;
    let m: usize = num(head[0], l)?;
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        let (l, t) = it.next().ok_or_else(|| Error::Input(format!("expected {m} entries")))?;
        expect_len(&t, &[2], l)?;
        out.push(ratio(t[0], t[1], l)?);
    }
    Ok(EdgeVector(out))
}

pub fn write_vector(x: &EdgeVector) -> String {
    let mut s = format!("{}\n", x.len());
    for v in &x.0 {
        writeln!(s, "{} {}", v.numer(), v.denom()).unwrap();
    }
    s
}

/// Edge indices of a cycle file: `k` then k lines `u v`.
pub fn parse_edge_set(text: &str, g: &Graph) -> Result<Vec<usize>> {
    let mut it = lines(text);
    let (l, head) = it.next().ok_or_else(|| Error::Input("empty edge set".into()))?;
    expect_len(&head, &[1], l)?;
    let k: usize = num(head[0], l)?;
    let mut used = vec![false; g.m()];
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let (l, t) = it.next().ok_or_else(|| Error::Input(format!("expected {k} edges")))?;
        expect_len(&t, &[2], l)?;
        let (u, v): (usize, usize) = (num(t[0], l)?, num(t[1], l)?);
        let e = locate(g, u, v, &used).ok_or_else(|| Error::Input(format!("line {l}: no edge {u} {v}")))?;
        used[e] = true;
        out.push(e);
    }
    Ok(out)
}

pub fn is_zero_vector(x: &EdgeVector) -> bool {
    x.0.iter().all(|v| v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{k4_graph, k4half};
    use crate::rational::rat;

    #[test]
    fn instance_round_trip() {
        let inst = Instance::cyclic(&k4half());
        let text = write_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        let plain = Instance::plain(k4_graph());
        assert_eq!(parse_instance(&write_instance(&plain)).unwrap(), plain);
    }

    #[test]
    fn combination_round_trip() {
        let g = k4_graph();
        let c = ConvexCombination::new(vec![
            (rat(1, 3), Multigraph::from_edges(6, [0, 1, 2, 3])),
            (rat(2, 3), Multigraph::from_edges(6, [0, 0, 4, 5])),
        ]);
        let text = write_combination(&c, &g);
        let back = parse_combination(&text, &g).unwrap();
        assert_eq!(write_combination(&back, &g), text);
        assert_eq!(back.normalized(), c.normalized());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_instance("4 1 1 2\n0 9 1 2\n").is_err());
        assert!(parse_instance("2 1\n0 1 1\n").is_err());
        assert!(parse_vector("2\n1 0\n0 1\n").is_err());
    }
}
