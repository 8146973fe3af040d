//! Partition of the 1-edges of a cubic base-case point into five induced
//! matchings that interact well with 2- and 3-edge cuts.

use std::collections::BTreeSet;

use crate::cuts::enumerate_cuts_upto;
use crate::cuts::side_mask;
use crate::cyclic::{critical_cuts, CyclicPoint};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const PARTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMethod {
    /// Recursion over 2- and 3-edge cuts with a Brooks colouring at the base.
    Structural,
    /// Exhaustive search, used only if the recursion's output fails checks.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingPartition {
    pub v: usize,
    /// Exactly five parts of host edge indices; part 0 contains e_v.
    pub parts: Vec<Vec<usize>>,
    pub method: PartitionMethod,
    /// Part holding both e_{w1} and e_{w2}, when a 2-edge cut forces them
    /// together; such a part cannot carry mass away from v.
    pub forced_pair: Option<usize>,
}

impl MatchingPartition {
    pub fn part_of(&self, e: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(&e))
    }
}

/// Cubic graph with a perfect matching of 1-edges; the input of the
/// recursion.
#[derive(Debug, Clone)]
struct Piece {
    g: Graph,
    is_w: Vec<bool>,
    v: usize,
}

pub fn partition_induced_matchings(p: &CyclicPoint, v: usize) -> Result<MatchingPartition> {
    if !p.is_cubic() {
        return Err(Error::Precondition("matching partition needs a cubic point".into()));
    }
    if v >= p.n() {
        return Err(Error::Input(format!("vertex {v} out of range")));
    }
    if !critical_cuts(p).is_empty() {
        return Err(Error::Precondition("point has a critical cut".into()));
    }
    let piece = Piece {
        g: p.graph.clone(),
        is_w: p.is_w.clone(),
        v,
    };
    let colours = colour_piece(&piece);
    let structural = arrange(p, v, &colours, PartitionMethod::Structural);
    if check_partition(p, v, &structural).is_ok() {
        return Ok(structural);
    }
    if let Some(colours) = search(p, v, true) {
        let mp = arrange(p, v, &colours, PartitionMethod::Search);
        check_partition(p, v, &mp).map_err(Error::Internal)?;
        return Ok(mp);
    }
    if check_partition_relaxed(p, v, &structural).is_ok() {
        return Ok(structural);
    }
    let colours = search(p, v, false).ok_or_else(|| {
        Error::NotFound("no partition into five induced matchings satisfies the cut conditions".into())
    })?;
    let mp = arrange(p, v, &colours, PartitionMethod::Search);
    check_partition_relaxed(p, v, &mp).map_err(Error::Internal)?;
    Ok(mp)
}

fn w_pair(p: &CyclicPoint, v: usize) -> (usize, usize) {
    let (f, g) = p.fractional_at(v);
    (p.e_of(p.graph.other(f, v)), p.e_of(p.graph.other(g, v)))
}

/// Orders classes: the one containing e_v first, the others by smallest
/// edge index, empty classes last.
fn arrange(p: &CyclicPoint, v: usize, colours: &[usize], method: PartitionMethod) -> MatchingPartition {
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); PARTS];
    for e in p.w_edges() {
        classes[colours[e]].push(e);
    }
    let ev = p.e_of(v);
    classes.sort_by_key(|c| (!c.contains(&ev), c.is_empty(), c.first().copied()));
    let (a, b) = w_pair(p, v);
    let forced_pair = if a == b {
        None
    } else {
        classes.iter().position(|c| c.contains(&a) && c.contains(&b))
    };
    MatchingPartition {
        v,
        parts: classes,
        method,
        forced_pair,
    }
}

fn colour_piece(piece: &Piece) -> Vec<usize> {
    let g = &piece.g;
    let n = g.n();
    if let Some(side) = enumerate_cuts_upto(g, 2).into_iter().next() {
        return split_two_cut(piece, &side);
    }
    let bad = enumerate_cuts_upto(g, 3).into_iter().find(|side| {
        let cut = g.cut_edges(&side_mask(n, side));
        cut.len() == 3 && cut.iter().all(|&e| piece.is_w[e]) && side.len() > 3 && n - side.len() > 3
    });
    if let Some(side) = bad {
        return split_three_cut(piece, &side);
    }
    base_colouring(piece)
}

/// Induced subgraph on `verts` plus extra edges among them. Returns the new
/// piece data and the map from new edge to old edge (None for extras).
fn induced(
    piece: &Piece,
    verts: &[usize],
    crossing: &[usize],
    extra: &[(usize, usize, bool)],
) -> (Graph, Vec<bool>, Vec<Option<usize>>, Vec<usize>) {
    let mut id = vec![usize::MAX; piece.g.n()];
    for (i, &u) in verts.iter().enumerate() {
        id[u] = i;
    }
    let mut edges = Vec::new();
    let mut is_w = Vec::new();
    let mut origin = Vec::new();
    for e in 0..piece.g.m() {
        let (a, b) = piece.g.edge(e);
        if (id[a] != usize::MAX && id[b] != usize::MAX) || crossing.contains(&e) {
            edges.push((id[a], id[b]));
            is_w.push(piece.is_w[e]);
            origin.push(Some(e));
        }
    }
    for &(a, b, w) in extra {
        edges.push((id[a], id[b]));
        is_w.push(w);
        origin.push(None);
    }
    (Graph::new(verts.len(), edges).expect("piece graph"), is_w, origin, id)
}

fn split_two_cut(piece: &Piece, side: &[usize]) -> Vec<usize> {
    let g = &piece.g;
    let n = g.n();
    let mut mask = side_mask(n, side);
    if !mask[piece.v] {
        mask.iter_mut().for_each(|b| *b = !*b);
    }
    let cut = g.cut_edges(&mask);
    let ends = |e: usize| {
        let (a, b) = g.edge(e);
        if mask[a] {
            (a, b)
        } else {
            (b, a)
        }
    };
    let (s1, t1) = ends(cut[0]);
    let (s2, t2) = ends(cut[1]);
    let u_side: Vec<usize> = (0..n).filter(|&u| mask[u]).collect();
    let o_side: Vec<usize> = (0..n).filter(|&u| !mask[u]).collect();

    let (g1, w1, o1, id1) = induced(piece, &u_side, &[], &[(s1, s2, true)]);
    let (g2, w2, o2, id2) = induced(piece, &o_side, &[], &[(t1, t2, true)]);
    let c1 = colour_piece(&Piece { g: g1, is_w: w1, v: id1[piece.v] });
    let c2 = colour_piece(&Piece { g: g2, is_w: w2, v: id2[t1] });
    let k1 = c1[o1.len() - 1];
    let k2 = c2[o2.len() - 1];
    let perm = |c: usize| if c == k2 { k1 } else if c == k1 { k2 } else { c };
    let mut out = vec![0; g.m()];
    for (i, o) in o1.iter().enumerate() {
        if let Some(e) = o {
            out[*e] = c1[i];
        }
    }
    for (i, o) in o2.iter().enumerate() {
        if let Some(e) = o {
            out[*e] = perm(c2[i]);
        }
    }
    out[cut[0]] = k1;
    out[cut[1]] = k1;
    out
}

fn split_three_cut(piece: &Piece, side: &[usize]) -> Vec<usize> {
    let g = &piece.g;
    let n = g.n();
    let mut mask = side_mask(n, side);
    if !mask[piece.v] {
        mask.iter_mut().for_each(|b| *b = !*b);
    }
    let cut = g.cut_edges(&mask);
    let (mut s, mut t) = (Vec::new(), Vec::new());
    for &e in &cut {
        let (a, b) = g.edge(e);
        if mask[a] {
            s.push(a);
            t.push(b);
        } else {
            s.push(b);
            t.push(a);
        }
    }
    let mut with_t: Vec<usize> = (0..n).filter(|&u| mask[u]).collect();
    with_t.extend(&t);
    let mut with_s: Vec<usize> = (0..n).filter(|&u| !mask[u]).collect();
    with_s.extend(&s);
    let tri = |x: &[usize]| vec![(x[0], x[1], false), (x[1], x[2], false), (x[0], x[2], false)];

    let (gv, wv, ov, idv) = induced(piece, &with_t, &cut, &tri(&t));
    let (go, wo, oo, ido) = induced(piece, &with_s, &cut, &tri(&s));
    let cv = colour_piece(&Piece { g: gv, is_w: wv, v: idv[piece.v] });
    let co = colour_piece(&Piece { g: go, is_w: wo, v: ido[s[0]] });

    let colour_of = |cols: &[usize], origin: &[Option<usize>], e: usize| {
        cols[origin.iter().position(|o| *o == Some(e)).unwrap()]
    };
    let mut perm: Vec<Option<usize>> = vec![None; PARTS];
    for &e in &cut {
        perm[colour_of(&co, &oo, e)] = Some(colour_of(&cv, &ov, e));
    }
    let used: BTreeSet<usize> = perm.iter().flatten().copied().collect();
    let mut free = (0..PARTS).filter(|c| !used.contains(c));
    for slot in perm.iter_mut() {
        if slot.is_none() {
            *slot = free.next();
        }
    }
    let mut out = vec![0; g.m()];
    for (i, o) in oo.iter().enumerate() {
        if let Some(e) = o {
            out[*e] = perm[co[i]].unwrap();
        }
    }
    for (i, o) in ov.iter().enumerate() {
        if let Some(e) = o {
            out[*e] = cv[i];
        }
    }
    out
}

/// Colours the W-contraction with at most four colours (five for K5), then
/// splits e_{w1} off if it shares a class with e_{w2}.
fn base_colouring(piece: &Piece) -> Vec<usize> {
    let g = &piece.g;
    let ws: Vec<usize> = (0..g.m()).filter(|&e| piece.is_w[e]).collect();
    let mut node_of = vec![usize::MAX; g.n()];
    for (i, &e) in ws.iter().enumerate() {
        let (a, b) = g.edge(e);
        node_of[a] = i;
        node_of[b] = i;
    }
    let k = ws.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for e in 0..g.m() {
        if !piece.is_w[e] {
            let (a, b) = g.edge(e);
            let (x, y) = (node_of[a], node_of[b]);
            if x != y {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
    }
    let adj: Vec<Vec<usize>> = adj.into_iter().map(|s| s.into_iter().collect()).collect();
    let mut col = brooks_colouring(&adj);

    let v = piece.v;
    let nb: Vec<usize> = (0..g.m())
        .filter(|&e| !piece.is_w[e])
        .filter_map(|e| {
            let (a, b) = g.edge(e);
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
        .collect();
    if nb.len() == 2 {
        let (x1, x2) = (node_of[nb[0]], node_of[nb[1]]);
        if x1 != x2 && col[x1] == col[x2] {
            let used: BTreeSet<usize> = col.iter().copied().collect();
            if let Some(fresh) = (0..PARTS).find(|c| !used.contains(c)) {
                col[x1] = fresh;
            }
        }
    }
    let mut out = vec![0; g.m()];
    for (i, &e) in ws.iter().enumerate() {
        out[e] = col[i];
    }
    out
}

/// Proper colouring with at most max(Δ, 3) colours for graphs that are not
/// complete, and |V| colours for complete graphs on at most five vertices.
/// Greedy along a reversed BFS order, then Kempe-chain repair of the root,
/// then exact backtracking if the repair fails.
pub fn brooks_colouring(adj: &[Vec<usize>]) -> Vec<usize> {
    let k = adj.len();
    if k == 0 {
        return Vec::new();
    }
    let max_deg = adj.iter().map(|a| a.len()).max().unwrap_or(0);
    let complete = adj.iter().all(|a| a.len() == k - 1);
    let budget = if complete { k } else { max_deg.max(3) };
    let mut col: Vec<Option<usize>> = vec![None; k];
    for comp_root in 0..k {
        if col[comp_root].is_some() {
            continue;
        }
        // BFS order of this component, coloured in reverse
        let mut order = vec![comp_root];
        let mut seen = vec![false; k];
        seen[comp_root] = true;
        let mut i = 0;
        while i < order.len() {
            for &w in &adj[order[i]] {
                if !seen[w] && col[w].is_none() {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
        for &u in order.iter().rev() {
            let taken: BTreeSet<usize> = adj[u].iter().filter_map(|&w| col[w]).collect();
            col[u] = (0..).find(|c| !taken.contains(c));
        }
        if col[comp_root].unwrap() >= budget {
            kempe_repair(adj, &mut col, comp_root, budget);
        }
    }
    let col: Vec<usize> = col.into_iter().map(|c| c.unwrap()).collect();
    if col.iter().all(|&c| c < budget) {
        return col;
    }
    exact_colouring(adj, budget).unwrap_or(col)
}

fn kempe_repair(adj: &[Vec<usize>], col: &mut [Option<usize>], u: usize, budget: usize) {
    for a in 0..budget {
        for b in 0..budget {
            if a == b {
                continue;
            }
            // swap colours a/b on the chain through u's a-neighbours
            let starts: Vec<usize> = adj[u].iter().copied().filter(|&w| col[w] == Some(a)).collect();
            let mut chain = BTreeSet::new();
            let mut stack = starts.clone();
            chain.extend(starts);
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if y != u && (col[y] == Some(a) || col[y] == Some(b)) && chain.insert(y) {
                        stack.push(y);
                    }
                }
            }
            let touches_b = adj[u].iter().any(|w| chain.contains(w) && col[*w] == Some(b));
            if touches_b {
                continue;
            }
            for &x in &chain {
                col[x] = if col[x] == Some(a) { Some(b) } else { Some(a) };
            }
            if adj[u].iter().all(|&w| col[w] != Some(a)) {
                col[u] = Some(a);
                return;
            }
        }
    }
}

fn exact_colouring(adj: &[Vec<usize>], budget: usize) -> Option<Vec<usize>> {
    fn rec(adj: &[Vec<usize>], budget: usize, i: usize, col: &mut Vec<usize>) -> bool {
        if i == adj.len() {
            return true;
        }
        let top = col.iter().copied().max().map_or(0, |m| m + 1).min(budget - 1);
        for c in 0..=top {
            if adj[i].iter().all(|&w| w >= i || col[w] != c) {
                col.push(c);
                if rec(adj, budget, i + 1, col) {
                    return true;
                }
                col.pop();
            }
        }
        false
    }
    let mut col = Vec::new();
    rec(adj, budget, 0, &mut col).then_some(col)
}

/// Exhaustive search for a colouring of the 1-edges meeting every condition.
fn search(p: &CyclicPoint, v: usize, strict: bool) -> Option<Vec<usize>> {
    let g = &p.graph;
    let n = g.n();
    let ws = p.w_edges();
    let mut conflicts: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.m()];
    for &a in &ws {
        for &b in &ws {
            if a != b && !induced_pair(g, a, b) {
                conflicts[a].insert(b);
            }
        }
    }
    let special = if strict { special_edges(p, v) } else { vec![p.e_of(v)] };
    let mut three: Vec<Vec<usize>> = Vec::new();
    let mut two: Vec<Vec<usize>> = Vec::new();
    for side in enumerate_cuts_upto(g, 3) {
        let cut = g.cut_edges(&side_mask(n, &side));
        let wcut: Vec<usize> = cut.iter().copied().filter(|&e| p.is_w[e]).collect();
        if cut.len() == 3 && wcut.len() > 1 {
            three.push(wcut);
        } else if cut.len() == 2 {
            two.push(wcut);
        }
    }
    let mut col: Vec<Option<usize>> = vec![None; g.m()];
    fn ok(col: &[Option<usize>], e: usize, conflicts: &[BTreeSet<usize>], special: &[usize], three: &[Vec<usize>], two: &[Vec<usize>]) -> bool {
        let c = col[e];
        if conflicts[e].iter().any(|&f| col[f] == c) {
            return false;
        }
        if special.contains(&e) && special.iter().any(|&f| f != e && col[f] == c) {
            return false;
        }
        for cut in three.iter().filter(|cut| cut.contains(&e)) {
            if cut.iter().any(|&f| f != e && col[f] == c) {
                return false;
            }
        }
        for cut in two.iter().filter(|cut| cut.contains(&e)) {
            if cut.iter().any(|&f| f != e && col[f].is_some() && col[f] != c) {
                return false;
            }
        }
        true
    }
    fn rec(
        i: usize,
        ws: &[usize],
        col: &mut Vec<Option<usize>>,
        conflicts: &[BTreeSet<usize>],
        special: &[usize],
        three: &[Vec<usize>],
        two: &[Vec<usize>],
        budget: &mut usize,
    ) -> bool {
        if i == ws.len() {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let top = ws[..i].iter().filter_map(|&e| col[e]).max().map_or(0, |m| m + 1).min(PARTS - 1);
        for c in 0..=top {
            col[ws[i]] = Some(c);
            if ok(col, ws[i], conflicts, special, three, two)
                && rec(i + 1, ws, col, conflicts, special, three, two, budget)
            {
                return true;
            }
        }
        col[ws[i]] = None;
        false
    }
    let mut budget = 5_000_000usize;
    if rec(0, &ws, &mut col, &conflicts, &special, &three, &two, &mut budget) {
        Some(col.into_iter().map(|c| c.unwrap_or(0)).collect())
    } else {
        None
    }
}

/// Two distinct 1-edges can share an induced matching: no common endpoint
/// and no edge between their endpoints.
fn induced_pair(g: &Graph, a: usize, b: usize) -> bool {
    let (a1, a2) = g.edge(a);
    let (b1, b2) = g.edge(b);
    let ea = [a1, a2];
    let eb = [b1, b2];
    if ea.iter().any(|x| eb.contains(x)) {
        return false;
    }
    !g.edges()
        .iter()
        .any(|&(x, y)| (ea.contains(&x) && eb.contains(&y)) || (ea.contains(&y) && eb.contains(&x)))
}

/// {e_v, e_{w1}, e_{w2}} as a set.
pub fn special_edges(p: &CyclicPoint, v: usize) -> Vec<usize> {
    let (f, g) = p.fractional_at(v);
    let w1 = p.graph.other(f, v);
    let w2 = p.graph.other(g, v);
    let mut s = vec![p.e_of(v), p.e_of(w1), p.e_of(w2)];
    s.sort_unstable();
    s.dedup();
    s
}

/// Checks every condition and returns the first violation.
pub fn check_partition(p: &CyclicPoint, v: usize, mp: &MatchingPartition) -> std::result::Result<(), String> {
    check(p, v, mp, true)
}

/// As `check_partition`, except that e_{w1} and e_{w2} may share a part
/// when some 2-edge cut forces it. The shared part must be `forced_pair`.
pub fn check_partition_relaxed(p: &CyclicPoint, v: usize, mp: &MatchingPartition) -> std::result::Result<(), String> {
    check(p, v, mp, false)?;
    let (a, b) = w_pair(p, v);
    match mp.forced_pair {
        Some(i) if mp.parts[i].contains(&a) && mp.parts[i].contains(&b) && a != b => {}
        Some(i) => return Err(format!("part {i} is marked but does not hold both e_w1 and e_w2")),
        None if a != b && mp.part_of(a) == mp.part_of(b) => {
            return Err("e_w1 and e_w2 share an unmarked part".into())
        }
        None => {}
    }
    if mp.forced_pair.is_some() && !forced_by_two_cut(p, a, b) {
        return Err("e_w1 and e_w2 share a part without a 2-edge cut forcing it".into());
    }
    Ok(())
}

/// True when a chain of 2-edge cuts ties the classes of `a` and `b`.
fn forced_by_two_cut(p: &CyclicPoint, a: usize, b: usize) -> bool {
    let g = &p.graph;
    let mut uf = crate::graph::UnionFind::new(g.m());
    for side in enumerate_cuts_upto(g, 2) {
        let cut = g.cut_edges(&side_mask(g.n(), &side));
        if cut.len() == 2 {
            uf.union(cut[0], cut[1]);
        }
    }
    uf.find(a) == uf.find(b)
}

fn check(p: &CyclicPoint, v: usize, mp: &MatchingPartition, strict: bool) -> std::result::Result<(), String> {
    let g = &p.graph;
    let n = g.n();
    if mp.parts.len() != PARTS {
        return Err(format!("expected {PARTS} parts, got {}", mp.parts.len()));
    }
    let mut count = vec![0usize; g.m()];
    for part in &mp.parts {
        for &e in part {
            if e >= g.m() || !p.is_w[e] {
                return Err(format!("edge {e} is not a 1-edge"));
            }
            count[e] += 1;
        }
    }
    for e in p.w_edges() {
        if count[e] != 1 {
            return Err(format!("1-edge {e} covered {} times", count[e]));
        }
    }
    for (i, part) in mp.parts.iter().enumerate() {
        for (j, &a) in part.iter().enumerate() {
            for &b in &part[j + 1..] {
                if !induced_pair(g, a, b) {
                    return Err(format!("part {i}: edges {a} and {b} are not an induced matching"));
                }
            }
        }
    }
    let ev = p.e_of(v);
    if !mp.parts[0].contains(&ev) {
        return Err("part 0 does not contain e_v".into());
    }
    // e_v never shares a part with e_{w1} or e_{w2}: an H-edge joins them
    let special = if strict { special_edges(p, v) } else { Vec::new() };
    for (i, part) in mp.parts.iter().enumerate() {
        if special.iter().filter(|e| part.contains(e)).count() > 1 {
            return Err(format!("condition (i) fails in part {i}"));
        }
    }
    for side in enumerate_cuts_upto(g, 3) {
        let cut = g.cut_edges(&side_mask(n, &side));
        for (i, part) in mp.parts.iter().enumerate() {
            let k = cut.iter().filter(|e| part.contains(e)).count();
            if cut.len() == 3 && k > 1 {
                return Err(format!("condition (ii) fails on cut {side:?} in part {i}"));
            }
            if cut.len() == 2 && k % 2 == 1 {
                return Err(format!("condition (iii) fails on cut {side:?} in part {i}"));
            }
        }
    }
    Ok(())
}

pub fn verify_partition(p: &CyclicPoint, v: usize, mp: &MatchingPartition) -> bool {
    check_partition(p, v, mp).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::k4half;

    #[test]
    fn k4half_partition() {
        let p = k4half();
        let mp = partition_induced_matchings(&p, 0).unwrap();
        assert_eq!(mp.parts, vec![vec![4], vec![5], vec![], vec![], vec![]]);
        assert_eq!(mp.method, PartitionMethod::Structural);
    }

    #[test]
    fn k5_needs_five_colours() {
        let adj: Vec<Vec<usize>> = (0..5).map(|u| (0..5).filter(|&w| w != u).collect()).collect();
        let col = brooks_colouring(&adj);
        let distinct: BTreeSet<usize> = col.iter().copied().collect();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn rejects_shared_triangle_cut_class() {
        let p = k4half();
        let mp = MatchingPartition {
            v: 0,
            parts: vec![vec![4, 5], vec![], vec![], vec![], vec![]],
            method: PartitionMethod::Structural,
            forced_pair: None,
        };
        assert!(!verify_partition(&p, 0, &mp));
    }
}
