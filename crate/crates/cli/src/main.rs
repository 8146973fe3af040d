mod report;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tourglue::cyclic::classify_cuts;
use tourglue::generators;
use tourglue::gluer::solve_cyclic_with;
use tourglue::io::{parse_combination, parse_edge_set, parse_instance, parse_vector, write_combination, write_instance, Instance};
use tourglue::matchings::{check_partition, check_partition_relaxed, partition_induced_matchings};
use tourglue::oracle::{oracle, Verdict};
use tourglue::rational::{fmt_rat, parse_rat, rat, Rational};
use tourglue::uniform::{christofides, solve_uniform23, solve_uniform24_base};
use tourglue::{ConvexCombination, Error};

use report::{Report, Target};

#[derive(Parser)]
#[command(name = "tourglue", version, about = "Exact convex combinations of tours for cyclic and uniform points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an instance is a cyclic point (or a subtour point).
    Validate { instance: Option<PathBuf> },
    /// List vertex cuts and all cuts of at most three edges with their kind.
    Cuts { instance: Option<PathBuf> },
    /// Partition the 1-edges into five induced matchings around a vertex.
    Matchings {
        instance: Option<PathBuf>,
        #[arg(long)]
        vertex: usize,
    },
    /// Build a convex combination of tours.
    Solve {
        #[command(subcommand)]
        what: Solve,
    },
    /// Verify a combination file against an instance.
    Verify {
        instance: PathBuf,
        combination: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        /// Hamilton cycle used for the uniform23 target.
        #[arg(long)]
        hamiltonian_hint: Option<PathBuf>,
    },
    /// Decide by enumeration whether a vector is a convex combination of tours.
    Oracle { instance: PathBuf, vector: PathBuf },
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        what: Gen,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Solve {
    Cyclic {
        instance: Option<PathBuf>,
        #[arg(long, default_value = "0")]
        zeta: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Christofides {
        instance: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Uniform23 {
        instance: Option<PathBuf>,
        #[arg(long)]
        hamiltonian_hint: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Uniform24 {
        instance: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Gen {
    K4half,
    Lowerbound {
        #[arg(long)]
        eps: String,
    },
    Octahedron,
    K4graph,
    Petersen,
    RandomCyclic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        seed: u64,
    },
}

/// Failure with its exit code: 1 for failed constructions or checks, 2 for
/// bad input.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::NotCyclic(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure { code: 1, message: format!("{}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn instance(path: Option<&Path>) -> Result<Instance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

/// Prints the report where it does not collide with combination output.
fn finish(report: &Report, to_stdout: bool) -> Result<(), Failure> {
    if to_stdout {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure { code: 1, message: "verification failed".into() })
    }
}

fn write_solution(c: &ConvexCombination, inst: &Instance, report: Report, output: Option<&Path>) -> Result<(), Failure> {
    emit(&write_combination(c, &inst.graph), output)?;
    finish(&report, output.is_some())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { instance: path } => {
            let inst = instance(path.as_deref())?;
            let mut r = Report::default();
            match (&inst.theta, &inst.x) {
                (Some(_), _) => {
                    let res = inst.to_cyclic();
                    r.check(res.is_ok(), match &res {
                        Ok(p) => format!("cyclic point, theta = {}, n = {}, m = {}", fmt_rat(&p.theta), p.n(), p.m()),
                        Err(e) => e.to_string(),
                    });
                }
                (None, Some(x)) => {
                    let res = tourglue::uniform::check_subtour(&inst.graph, x);
                    r.check(res.is_ok(), match &res {
                        Ok(()) => "subtour point".to_string(),
                        Err(e) => e.to_string(),
                    });
                }
                (None, None) => {
                    let g = &inst.graph;
                    let k = g.degree(0);
                    let res = tourglue::uniform::check_uniform(g, k);
                    r.check(res.is_ok(), match &res {
                        Ok(()) => format!("{k}-regular and {k}-edge-connected graph"),
                        Err(e) => e.to_string(),
                    });
                }
            }
            finish(&r, true)
        }
        Command::Cuts { instance: path } => {
            let p = instance(path.as_deref())?.to_cyclic()?;
            for c in classify_cuts(&p) {
                println!("{:?} {} {:?}", c.kind, fmt_rat(&c.value), c.side);
            }
            Ok(())
        }
        Command::Matchings { instance: path, vertex } => {
            let p = instance(path.as_deref())?.to_cyclic()?;
            if vertex >= p.n() {
                return Err(input(format!("vertex {vertex} out of range")));
            }
            let mp = partition_induced_matchings(&p, vertex)?;
            for (i, part) in mp.parts.iter().enumerate() {
                let edges: Vec<String> = part.iter().map(|&e| format!("{:?}", p.graph.edge(e))).collect();
                println!("M{i}: {}", edges.join(" "));
            }
            let mut r = Report::default();
            let strict = check_partition(&p, vertex, &mp);
            r.check(strict.is_ok() || mp.forced_pair.is_some(), match &strict {
                Ok(()) => "conditions (i)-(iii) hold".to_string(),
                Err(e) => format!("strict check: {e}"),
            });
            if let Some(i) = mp.forced_pair {
                let relaxed = check_partition_relaxed(&p, vertex, &mp);
                r.check(relaxed.is_ok(), format!("part {i} holds both 1-edges at the fractional neighbours, forced by a 2-edge cut"));
            }
            finish(&r, true)
        }
        Command::Solve { what } => solve(what),
        Command::Verify { instance: ipath, combination, target, hamiltonian_hint } => {
            let inst = instance(Some(&ipath))?;
            let c = parse_combination(&read(Some(&combination))?, &inst.graph)?;
            let r = match target {
                Target::Cyclic => report::verify_cyclic(&inst.to_cyclic()?, &c),
                Target::Christofides => {
                    let x = inst.x.as_ref().ok_or_else(|| input("instance has no edge values"))?;
                    report::verify_christofides(&inst.graph, x, &c)
                }
                Target::Uniform23 => {
                    let factor = if hamiltonian_hint.is_some() { rat(87, 68) } else { rat(17, 12) };
                    report::verify_uniform(&inst.graph, &c, factor * rat(2, 3))
                }
                Target::Uniform24 => report::verify_uniform(&inst.graph, &c, rat(31, 42)),
            };
            finish(&r, true)
        }
        Command::Oracle { instance: ipath, vector } => {
            let inst = instance(Some(&ipath))?;
            let y = parse_vector(&read(Some(&vector))?)?;
            match oracle(&inst.graph, &y)? {
                Verdict::Feasible { tours, weights } => {
                    println!("feasible ({tours} tours enumerated, {} in the certificate)", weights.len());
                    Ok(())
                }
                Verdict::Infeasible { tours } => {
                    println!("infeasible ({tours} tours enumerated)");
                    Err(Failure { code: 1, message: "vector is not a convex combination of tours".into() })
                }
            }
        }
        Command::Gen { what, output } => {
            let inst = match what {
                Gen::K4half => Instance::cyclic(&generators::k4half()),
                Gen::Lowerbound { eps } => Instance::cyclic(&generators::lower_bound(&parse_rat(&eps)?)?),
                Gen::Octahedron => Instance::plain(generators::octahedron()),
                Gen::K4graph => Instance::plain(generators::k4_graph()),
                Gen::Petersen => Instance::plain(generators::petersen()),
                Gen::RandomCyclic { n, theta, seed } => Instance::cyclic(&generators::random_cyclic(n, &parse_rat(&theta)?, seed)?),
            };
            emit(&write_instance(&inst), output.as_deref())
        }
    }
}

fn solve(what: Solve) -> Result<(), Failure> {
    match what {
        Solve::Cyclic { instance: path, zeta, output } => {
            let inst = instance(path.as_deref())?;
            let p = inst.to_cyclic()?;
            let zeta: Rational = parse_rat(&zeta)?;
            let sol = solve_cyclic_with(&p, &zeta)?;
            let mut r = report::verify_cyclic(&p, &sol.combination);
            let s = &sol.stats;
            r.note(format!(
                "base cases {}, glued cuts {}, refitted cuts {}, enumeration fallbacks {}, forced pairs {}, terms {}",
                s.base_cases,
                s.glued_cuts,
                s.repairs,
                s.enumeration_fallbacks,
                s.forced_pairs,
                sol.combination.len()
            ));
            write_solution(&sol.combination, &inst, r, output.as_deref())
        }
        Solve::Christofides { instance: path, output } => {
            let inst = instance(path.as_deref())?;
            let x = inst.x.clone().ok_or_else(|| input("instance has no edge values"))?;
            let c = christofides(&inst.graph, &x)?;
            let r = report::verify_christofides(&inst.graph, &x, &c);
            write_solution(&c, &inst, r, output.as_deref())
        }
        Solve::Uniform23 { instance: path, hamiltonian_hint, output } => {
            let inst = instance(path.as_deref())?;
            let hint = match &hamiltonian_hint {
                Some(h) => Some(parse_edge_set(&read(Some(h))?, &inst.graph)?),
                None => None,
            };
            let c = solve_uniform23(&inst.graph, hint.as_deref())?;
            let factor = if hint.is_some() { rat(87, 68) } else { rat(17, 12) };
            let r = report::verify_uniform(&inst.graph, &c, factor * rat(2, 3));
            write_solution(&c, &inst, r, output.as_deref())
        }
        Solve::Uniform24 { instance: path, output } => {
            let inst = instance(path.as_deref())?;
            let u = solve_uniform24_base(&inst.graph)?;
            let mut r = report::verify_uniform(&inst.graph, &u.combination, rat(31, 42));
            let audit = u.audit(inst.graph.m());
            r.check(
                audit.join_given_matching.iter().all(|v| *v == rat(19, 42)),
                "Pr[e in J | e in M] = 19/42 on every edge",
            );
            r.check(audit.join.iter().all(|v| *v == rat(5, 21)), "Pr[e in J] = 5/21 on every edge");
            write_solution(&u.combination, &inst, r, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
