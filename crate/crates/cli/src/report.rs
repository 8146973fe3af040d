//! PASS/FAIL reports computed from files alone.

use std::fmt;

use tourglue::cyclic::CyclicPoint;
use tourglue::graph::{combination_value, is_tour, ConvexCombination, EdgeVector, Graph};
use tourglue::patterns::{is_handpicked, phi2};
use tourglue::rational::{fmt_rat, one, rat, Rational};
use tourglue::uniform::check_subtour;

#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(bool, String)>,
    notes: Vec<String>,
}

impl Report {
    pub fn check(&mut self, ok: bool, what: impl Into<String>) -> bool {
        self.lines.push((ok, what.into()));
        ok
    }

    pub fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|(ok, _)| *ok)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ok, what) in &self.lines {
            writeln!(f, "{} {what}", if *ok { "PASS" } else { "FAIL" })?;
        }
        for n in &self.notes {
            writeln!(f, "NOTE {n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Cyclic,
    Christofides,
    Uniform23,
    Uniform24,
}

/// First edge where `got` and `want` differ, formatted.
fn first_difference(got: &EdgeVector, want: &EdgeVector, g: &Graph) -> Option<String> {
    (0..want.len()).find(|&e| got.get(e) != want.get(e)).map(|e| {
        let (u, v) = g.edge(e);
        format!("edge {e} ({u},{v}) has {}, expected {}", fmt_rat(got.get(e)), fmt_rat(want.get(e)))
    })
}

fn common(r: &mut Report, g: &Graph, c: &ConvexCombination, target: &EdgeVector) {
    let total = c.total_weight();
    let positive = c.terms.iter().all(|(l, _)| *l > Rational::from_integer(0.into()));
    r.check(positive && total == one(), format!("multipliers positive, sum {}", fmt_rat(&total)));
    let bad = c.terms.iter().position(|(_, f)| !is_tour(g, f));
    r.check(bad.is_none(), match bad {
        None => format!("all {} terms are tours (connected, spanning, even degrees)", c.len()),
        Some(i) => format!("term {i} is not a tour"),
    });
    let value = combination_value(c, g.m());
    match first_difference(&value, target, g) {
        None => r.check(true, "value equals the target exactly"),
        Some(d) => r.check(false, format!("value differs from the target: {d}")),
    };
}

pub fn verify_cyclic(p: &CyclicPoint, c: &ConvexCombination) -> Report {
    let mut r = Report::default();
    let y = p.target_y();
    r.note(format!(
        "target: {} on 1-edges, (3/2)x on fractional edges",
        fmt_rat(&(rat(3, 2) - &p.theta / Rational::from_integer(10.into())))
    ));
    common(&mut r, &p.graph, c, &y);
    if p.is_cubic() {
        let bad = c.terms.iter().position(|(_, f)| !is_handpicked(p, f));
        r.check(bad.is_none(), match bad {
            None => "every term has an admissible pattern at every vertex".to_string(),
            Some(i) => format!("term {i} has an inadmissible pattern"),
        });
        let q = phi2(c, p.m());
        let w = p.w_edges();
        if let Some(&e) = w.first() {
            r.note(format!("doubled frequency on 1-edge {e}: {}", fmt_rat(q.get(e))));
        }
        r.note("the value of zeta passed between the sides of a glued cut is the frequency of pattern {2e}");
    }
    r
}

pub fn verify_christofides(g: &Graph, x: &EdgeVector, c: &ConvexCombination) -> Report {
    let mut r = Report::default();
    let pre = check_subtour(g, x);
    r.check(pre.is_ok(), match &pre {
        Ok(()) => "input lies in the subtour polytope".to_string(),
        Err(e) => format!("input: {e}"),
    });
    common(&mut r, g, c, &x.scale(&rat(3, 2)));
    r
}

pub fn verify_uniform(g: &Graph, c: &ConvexCombination, per_edge: Rational) -> Report {
    let mut r = Report::default();
    r.note(format!("target: {} per edge", fmt_rat(&per_edge)));
    common(&mut r, g, c, &EdgeVector::constant(g.m(), per_edge));
    r
}
