//! Maximum-weight matching in general graphs (Edmonds' primal-dual blossom
//! method, following Van Rantwijk's formulation) over exact weights.
//!
//! Integer weights keep every dual integral, so `i128` runs exactly.

use num_traits::{NumAssignRef, NumRef, Signed};

/// Exact ordered weights: `i128` or `Rational`.
pub trait Weight: NumRef + NumAssignRef + Signed + Ord + Clone {}

impl<W: NumRef + NumAssignRef + Signed + Ord + Clone> Weight for W {}

fn two<W: Weight>() -> W {
    W::one() + W::one()
}

struct State<'a, W: Weight> {
    nv: usize,
    edges: &'a [(usize, usize, W)],
    endpoint: Vec<usize>,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<Option<usize>>,
    label: Vec<i8>,
    labelend: Vec<Option<usize>>,
    inblossom: Vec<usize>,
    blossomparent: Vec<Option<usize>>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<Option<usize>>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<Option<usize>>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<W>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

fn wrap(len: usize, j: isize) -> usize {
    j.rem_euclid(len as isize) as usize
}

impl<W: Weight> State<'_, W> {
    fn slack(&self, k: usize) -> W {
        let (i, j, ref w) = self.edges[k];
        self.dualvar[i].clone() + &self.dualvar[j] - w.clone() * two::<W>()
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        if b < self.nv {
            return vec![b];
        }
        let mut out = Vec::new();
        for &c in &self.blossomchilds[b] {
            out.extend(self.leaves(c));
        }
        out
    }

    fn assign_label(&mut self, w: usize, t: i8, p: Option<usize>) {
        let b = self.inblossom[w];
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = None;
        self.bestedge[b] = None;
        if t == 1 {
            let l = self.leaves(b);
            self.queue.extend(l);
        } else if t == 2 {
            let base = self.blossombase[b].unwrap();
            let mb = self.mate[base].unwrap();
            self.assign_label(self.endpoint[mb], 1, Some(mb ^ 1));
        }
    }

    fn scan_blossom(&mut self, v: usize, w: usize) -> Option<usize> {
        let mut path = Vec::new();
        let mut base = None;
        let mut v = Some(v);
        let mut w = Some(w);
        while let Some(vv) = v {
            let mut b = self.inblossom[vv];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            path.push(b);
            self.label[b] = 5;
            match self.labelend[b] {
                None => v = None,
                Some(le) => {
                    let t = self.endpoint[le];
                    b = self.inblossom[t];
                    v = Some(self.endpoint[self.labelend[b].unwrap()]);
                }
            }
            if w.is_some() {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().unwrap();
        self.blossombase[b] = Some(base);
        self.blossomparent[b] = None;
        self.blossomparent[bb] = Some(b);
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = Some(b);
            path.push(bv);
            endps.push(self.labelend[bv].unwrap());
            v = self.endpoint[self.labelend[bv].unwrap()];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = Some(b);
            path.push(bw);
            endps.push(self.labelend[bw].unwrap() ^ 1);
            w = self.endpoint[self.labelend[bw].unwrap()];
            bw = self.inblossom[w];
        }
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = W::zero();
        for leaf in self.leaves(b) {
            if self.label[self.inblossom[leaf]] == 2 {
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }
        let mut bestedgeto: Vec<Option<usize>> = vec![None; 2 * self.nv];
        for &sub in &path {
            let nblists: Vec<Vec<usize>> = match self.blossombestedges[sub].take() {
                None => self
                    .leaves(sub)
                    .into_iter()
                    .map(|u| self.neighbend[u].iter().map(|p| p / 2).collect())
                    .collect(),
                Some(list) => vec![list],
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && bestedgeto[bj].is_none_or(|cur| self.slack(k) < self.slack(cur))
                    {
                        bestedgeto[bj] = Some(k);
                    }
                }
            }
            self.bestedge[sub] = None;
        }
        let list: Vec<usize> = bestedgeto.into_iter().flatten().collect();
        let mut best: Option<usize> = None;
        for &k in &list {
            if best.is_none_or(|cur| self.slack(k) < self.slack(cur)) {
                best = Some(k);
            }
        }
        self.blossombestedges[b] = Some(list);
        self.bestedge[b] = best;
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        for s in self.blossomchilds[b].clone() {
            self.blossomparent[s] = None;
            if s < self.nv {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s].is_zero() {
                self.expand_blossom(s, endstage);
            } else {
                for leaf in self.leaves(s) {
                    self.inblossom[leaf] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            let childs = self.blossomchilds[b].clone();
            let endps = self.blossomendps[b].clone();
            let len = childs.len();
            let entrychild = self.inblossom[self.endpoint[self.labelend[b].unwrap() ^ 1]];
            let mut j = childs.iter().position(|&c| c == entrychild).unwrap() as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 == 1 {
                j -= len as isize;
                (1, 0)
            } else {
                (-1, 1)
            };
            let mut p = self.labelend[b].unwrap();
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = endps[wrap(len, j - endptrick as isize)];
                self.label[self.endpoint[q ^ endptrick ^ 1]] = 0;
                self.assign_label(self.endpoint[p ^ 1], 2, Some(p));
                self.allowedge[q / 2] = true;
                j += jstep;
                p = endps[wrap(len, j - endptrick as isize)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = childs[wrap(len, j)];
            let ep = self.endpoint[p ^ 1];
            self.label[ep] = 2;
            self.label[bv] = 2;
            self.labelend[ep] = Some(p);
            self.labelend[bv] = Some(p);
            self.bestedge[bv] = None;
            j += jstep;
            while childs[wrap(len, j)] != entrychild {
                let bv = childs[wrap(len, j)];
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut reached = None;
                for leaf in self.leaves(bv) {
                    if self.label[leaf] != 0 {
                        reached = Some(leaf);
                        break;
                    }
                }
                if let Some(v) = reached {
                    debug_assert_eq!(self.label[v], 2);
                    debug_assert_eq!(self.inblossom[v], bv);
                    self.label[v] = 0;
                    let base = self.blossombase[bv].unwrap();
                    let m = self.mate[base].unwrap();
                    self.label[self.endpoint[m]] = 0;
                    self.assign_label(v, 2, self.labelend[v]);
                }
                j += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = None;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = None;
        self.blossombestedges[b] = None;
        self.bestedge[b] = None;
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != Some(b) {
            t = self.blossomparent[t].unwrap();
        }
        if t >= self.nv {
            self.augment_blossom(t, v);
        }
        let len = self.blossomchilds[b].len();
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap();
        let mut j = i as isize;
        let (jstep, endptrick): (isize, usize) = if i & 1 == 1 {
            j -= len as isize;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = self.blossomchilds[b][wrap(len, j)];
            let p = self.blossomendps[b][wrap(len, j - endptrick as isize)] ^ endptrick;
            if t >= self.nv {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = self.blossomchilds[b][wrap(len, j)];
            if t >= self.nv {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = Some(p ^ 1);
            self.mate[self.endpoint[p ^ 1]] = Some(p);
        }
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], Some(v));
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (s0, p0) in [(v, 2 * k + 1), (w, 2 * k)] {
            let mut s = s0;
            let mut p = p0;
            loop {
                let bs = self.inblossom[s];
                if bs >= self.nv {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = Some(p);
                let Some(le) = self.labelend[bs] else { break };
                let t = self.endpoint[le];
                let bt = self.inblossom[t];
                let lt = self.labelend[bt].unwrap();
                s = self.endpoint[lt];
                let j = self.endpoint[lt ^ 1];
                if bt >= self.nv {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = Some(lt);
                p = lt ^ 1;
            }
        }
    }
}

/// Maximum-weight matching. With `max_cardinality`, maximizes weight among
/// maximum-cardinality matchings. Returns the mate of every vertex.
pub fn max_weight_matching<W: Weight>(
    n: usize,
    edges: &[(usize, usize, W)],
    max_cardinality: bool,
) -> Vec<Option<usize>> {
    if edges.is_empty() {
        return vec![None; n];
    }
    let m = edges.len();
    let maxweight = edges
        .iter()
        .map(|e| e.2.clone())
        .fold(W::zero(), |a, b| if b > a { b } else { a });
    let mut endpoint = Vec::with_capacity(2 * m);
    for &(i, j, _) in edges {
        endpoint.push(i);
        endpoint.push(j);
    }
    let mut neighbend = vec![Vec::new(); n];
    for (k, &(i, j, _)) in edges.iter().enumerate() {
        neighbend[i].push(2 * k + 1);
        neighbend[j].push(2 * k);
    }
    let mut s = State {
        nv: n,
        edges,
        endpoint,
        neighbend,
        mate: vec![None; n],
        label: vec![0; 2 * n],
        labelend: vec![None; 2 * n],
        inblossom: (0..n).collect(),
        blossomparent: vec![None; 2 * n],
        blossomchilds: vec![Vec::new(); 2 * n],
        blossombase: (0..n).map(Some).chain(std::iter::repeat_n(None, n)).collect(),
        blossomendps: vec![Vec::new(); 2 * n],
        bestedge: vec![None; 2 * n],
        blossombestedges: vec![None; 2 * n],
        unusedblossoms: (n..2 * n).collect(),
        dualvar: std::iter::repeat_n(maxweight, n).chain(std::iter::repeat_n(W::zero(), n)).collect(),
        allowedge: vec![false; m],
        queue: Vec::new(),
    };

    for _ in 0..n {
        s.label = vec![0; 2 * n];
        s.bestedge = vec![None; 2 * n];
        for b in n..2 * n {
            s.blossombestedges[b] = None;
        }
        s.allowedge = vec![false; m];
        s.queue.clear();
        for v in 0..n {
            if s.mate[v].is_none() && s.label[s.inblossom[v]] == 0 {
                s.assign_label(v, 1, None);
            }
        }
        let mut augmented = false;
        loop {
            while !augmented {
                let Some(v) = s.queue.pop() else { break };
                for p in s.neighbend[v].clone() {
                    let k = p / 2;
                    let w = s.endpoint[p];
                    if s.inblossom[v] == s.inblossom[w] {
                        continue;
                    }
                    let mut kslack = W::zero();
                    if !s.allowedge[k] {
                        kslack = s.slack(k);
                        if !kslack.is_positive() {
                            s.allowedge[k] = true;
                        }
                    }
                    if s.allowedge[k] {
                        if s.label[s.inblossom[w]] == 0 {
                            s.assign_label(w, 2, Some(p ^ 1));
                        } else if s.label[s.inblossom[w]] == 1 {
                            match s.scan_blossom(v, w) {
                                Some(base) => s.add_blossom(base, k),
                                None => {
                                    s.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            }
                        } else if s.label[w] == 0 {
                            s.label[w] = 2;
                            s.labelend[w] = Some(p ^ 1);
                        }
                    } else if s.label[s.inblossom[w]] == 1 {
                        let b = s.inblossom[v];
                        if s.bestedge[b].is_none_or(|cur| kslack < s.slack(cur)) {
                            s.bestedge[b] = Some(k);
                        }
                    } else if s.label[w] == 0 && s.bestedge[w].is_none_or(|cur| kslack < s.slack(cur)) {
                        s.bestedge[w] = Some(k);
                    }
                }
            }
            if augmented {
                break;
            }
            let mut deltatype = -1;
            let mut delta = W::zero();
            let mut deltaedge = None;
            let mut deltablossom = None;
            if !max_cardinality {
                deltatype = 1;
                delta = s.dualvar[..n].iter().min().unwrap().clone();
            }
            for v in 0..n {
                if s.label[s.inblossom[v]] == 0 {
                    if let Some(be) = s.bestedge[v] {
                        let d = s.slack(be);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = Some(be);
                        }
                    }
                }
            }
            for b in 0..2 * n {
                if s.blossomparent[b].is_none() && s.label[b] == 1 {
                    if let Some(be) = s.bestedge[b] {
                        let d = s.slack(be) / two::<W>();
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = Some(be);
                        }
                    }
                }
            }
            for b in n..2 * n {
                if s.blossombase[b].is_some()
                    && s.blossomparent[b].is_none()
                    && s.label[b] == 2
                    && (deltatype == -1 || s.dualvar[b] < delta)
                {
                    delta = s.dualvar[b].clone();
                    deltatype = 4;
                    deltablossom = Some(b);
                }
            }
            if deltatype == -1 {
                deltatype = 1;
                let mn = s.dualvar[..n].iter().min().unwrap().clone();
                delta = if mn.is_negative() { W::zero() } else { mn };
            }
            for v in 0..n {
                match s.label[s.inblossom[v]] {
                    1 => s.dualvar[v] -= &delta,
                    2 => s.dualvar[v] += &delta,
                    _ => {}
                }
            }
            for b in n..2 * n {
                if s.blossombase[b].is_some() && s.blossomparent[b].is_none() {
                    match s.label[b] {
                        1 => s.dualvar[b] += &delta,
                        2 => s.dualvar[b] -= &delta,
                        _ => {}
                    }
                }
            }
            match deltatype {
                1 => break,
                2 => {
                    let k = deltaedge.unwrap();
                    s.allowedge[k] = true;
                    let (mut i, mut j, _) = s.edges[k];
                    if s.label[s.inblossom[i]] == 0 {
                        std::mem::swap(&mut i, &mut j);
                    }
                    s.queue.push(i);
                }
                3 => {
                    let k = deltaedge.unwrap();
                    s.allowedge[k] = true;
                    s.queue.push(s.edges[k].0);
                }
                _ => s.expand_blossom(deltablossom.unwrap(), false),
            }
        }
        if !augmented {
            break;
        }
        for b in n..2 * n {
            if s.blossomparent[b].is_none()
                && s.blossombase[b].is_some()
                && s.label[b] == 1
                && s.dualvar[b].is_zero()
            {
                s.expand_blossom(b, true);
            }
        }
    }
    s.mate.iter().map(|m| m.map(|p| s.endpoint[p])).collect()
}

/// Maximum-weight perfect matching; returns chosen edge indices or `None`
/// when no perfect matching exists. Weights may be negative.
pub fn max_weight_perfect_matching<W: Weight>(n: usize, edges: &[(usize, usize, W)]) -> Option<Vec<usize>> {
    if n % 2 == 1 {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let min = edges.iter().map(|e| e.2.clone()).min()?;
    let shift = W::one() - min;
    let shifted: Vec<(usize, usize, W)> = edges.iter().map(|(u, v, w)| (*u, *v, w.clone() + &shift)).collect();
    let mate = max_weight_matching(n, &shifted, true);
    if mate.iter().any(|m| m.is_none()) {
        return None;
    }
    // recover edge indices: best-weight edge between each matched pair
    let mut chosen = Vec::new();
    for u in 0..n {
        let v = mate[u].unwrap();
        if u < v {
            let k = (0..edges.len())
                .filter(|&k| {
                    let (a, b, _) = edges[k];
                    (a == u && b == v) || (a == v && b == u)
                })
                .max_by(|&a, &b| edges[a].2.cmp(&edges[b].2).then(b.cmp(&a)))
                .unwrap();
            chosen.push(k);
        }
    }
    chosen.sort_unstable();
    Some(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, zero, Rational};

    fn weight(edges: &[(usize, usize, Rational)], mate: &[Option<usize>]) -> Rational {
        let mut total = zero();
        for &(u, v, ref w) in edges {
            if mate[u] == Some(v) {
                total += w;
            }
        }
        total
    }

    fn brute(n: usize, edges: &[(usize, usize, Rational)], maxcard: bool) -> (usize, Rational) {
        let mut best = (0usize, zero());
        for mask in 0u32..(1 << edges.len()) {
            let mut used = vec![false; n];
            let mut ok = true;
            let mut w = zero();
            let mut c = 0;
            for (k, (u, v, x)) in edges.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    if used[*u] || used[*v] {
                        ok = false;
                        break;
                    }
                    used[*u] = true;
                    used[*v] = true;
                    w += x;
                    c += 1;
                }
            }
            if ok {
                let better = if maxcard { (c, w.clone()) > best } else { w > best.1 };
                if better {
                    best = (c, w);
                }
            }
        }
        best
    }

    #[test]
    fn small_cases_match_brute_force() {
        let cases: Vec<(usize, Vec<(usize, usize, Rational)>)> = vec![
            (3, vec![(0, 1, int(1)), (1, 2, int(2)), (0, 2, int(3))]),
            (
                6,
                vec![
                    (0, 1, int(5)),
                    (1, 2, int(11)),
                    (2, 3, int(5)),
                    (3, 0, rat(7, 2)),
                    (0, 4, int(3)),
                    (4, 5, int(8)),
                    (2, 5, rat(1, 3)),
                ],
            ),
            (
                10,
                vec![
                    (0, 1, int(45)),
                    (0, 4, int(50)),
                    (1, 2, int(50)),
                    (2, 3, int(50)),
                    (3, 4, int(50)),
                    (0, 5, int(30)),
                    (2, 8, int(35)),
                    (3, 7, int(35)),
                    (4, 6, int(26)),
                    (8, 9, int(5)),
                ],
            ),
        ];
        for (n, edges) in cases {
            for maxcard in [false, true] {
                let mate = max_weight_matching(n, &edges, maxcard);
                for u in 0..n {
                    if let Some(v) = mate[u] {
                        assert_eq!(mate[v], Some(u));
                    }
                }
                let (c, w) = brute(n, &edges, maxcard);
                assert_eq!(weight(&edges, &mate), w);
                if maxcard {
                    assert_eq!(mate.iter().filter(|m| m.is_some()).count(), 2 * c);
                }
            }
        }
    }

    #[test]
    fn integer_weights_match_rational_weights() {
        let edges: Vec<(usize, usize, i128)> =
            vec![(0, 1, 45), (0, 4, 50), (1, 2, 50), (2, 3, 50), (3, 4, 50), (0, 5, 30), (2, 8, 35), (3, 7, 35), (4, 6, 26), (8, 9, 5)];
        let rational: Vec<(usize, usize, Rational)> = edges.iter().map(|&(u, v, w)| (u, v, int(w as i64))).collect();
        for maxcard in [false, true] {
            assert_eq!(max_weight_matching(10, &edges, maxcard), max_weight_matching(10, &rational, maxcard));
        }
    }
}
