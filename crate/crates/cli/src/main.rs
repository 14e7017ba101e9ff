mod input;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use stallings::matrix;
use stallings::product;
use stallings::subgroup::{self, Subgroup};
use stallings::verify::{self, FuzzConfig, Status};
use stallings::word::Word;

use input::{parse_words, read_subgroup, InputError};

/// Core graphs of subgroups of free groups: intersections, joins,
/// pushouts, incidence matrices and rank-inequality checks.
///
/// SPEC arguments are inline JSON (`{"generators":["a","bab"]}`), a path to
/// a JSON file of that shape, or a comma-separated rank-2 generator list
/// (`a,bab`).
#[derive(Parser)]
#[command(name = "stallings", version)]
struct Cli {
    /// Machine-readable JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Core graph of the subgroup generated by GENS.
    Core {
        #[arg(required = true)]
        gens: Vec<String>,
        /// Rank of the ambient free group.
        #[arg(long, default_value_t = 2)]
        rank: u32,
        /// Also print the graph in DOT.
        #[arg(long)]
        dot: bool,
    },
    /// H ∩ K through the fiber product.
    Intersect {
        h: String,
        k: String,
        /// Print the based fiber-product component in DOT.
        #[arg(long)]
        dot: bool,
    },
    /// H ∨ K through the folded wedge.
    Join { h: String, k: String },
    /// The topological pushout along Γ_{H∩K}.
    Pushout {
        h: String,
        k: String,
        #[arg(long)]
        dot: bool,
    },
    /// Incidence matrix, normal form and bounds of the normalized pair.
    Matrix { h: String, k: String },
    /// Every inequality and structure check on one pair.
    Check { h: String, k: String },
    /// The fixed corpus of known instances.
    Corpus,
    /// Random campaign; JSON lines on stdout, summary on stderr.
    Fuzz {
        /// Overridden by STALLINGS_SEED when set.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        min_rank: usize,
        /// Most generators per subgroup.
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Resample until each subgroup has exactly this rank.
        #[arg(long)]
        exact_rank: Option<usize>,
        /// Common random words added to both subgroups.
        #[arg(long, default_value_t = 0)]
        shared: usize,
        /// Write the JSON lines here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for failure fixtures.
        #[arg(long, default_value = "fuzz-failures")]
        fixtures: PathBuf,
        /// Evaluate on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

enum Failure {
    Usage(String),
    Verdict(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Usage(e.0)
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn words(ws: &[Word]) -> Vec<String> {
    ws.iter().map(Word::to_string).collect()
}

fn aligned(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let pad = width - k.chars().count();
        writeln!(out, "{k}{}  {v}", " ".repeat(pad)).unwrap();
    }
    out
}

fn subgroup_rows(s: &Subgroup) -> Vec<(&'static str, String)> {
    let st = s.graph().stats();
    vec![
        ("rank", s.rank().to_string()),
        ("basis", words(&s.basis()).join(" ")),
        ("vertices", st.vertices.to_string()),
        ("edges", st.edges.to_string()),
        ("branch vertices", st.branch_count.to_string()),
    ]
}

fn subgroup_json(s: &Subgroup) -> serde_json::Value {
    json!({
        "rank": s.rank(),
        "basis": words(&s.basis()),
        "stats": s.graph().stats(),
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut out = String::new();
    match cli.command {
        Command::Core { gens, rank, dot } => {
            let s = parse_words(rank, &gens)?;
            if cli.json {
                let mut v = subgroup_json(&s);
                v["generators"] = json!(words(s.generators()));
                if dot {
                    v["dot"] = json!(s.graph().to_dot("core"));
                }
                writeln!(out, "{v}").unwrap();
            } else {
                let mut rows = vec![("generators", words(s.generators()).join(" "))];
                rows.extend(subgroup_rows(&s));
                out.push_str(&aligned(&rows));
                if dot {
                    out.push_str(&s.graph().to_dot("core"));
                }
            }
        }
        Command::Intersect { h, k, dot } => {
            let (h, k) = (read_subgroup(&h)?, read_subgroup(&k)?);
            let meet = product::intersection(&h, &k).map_err(usage)?;
            let fp_dot = dot.then(|| {
                let fp = product::based_fiber_product(&h, &k).expect("alphabets already checked");
                let labels: Vec<String> = fp.coordinates.iter().map(|(u, v)| format!("({u},{v})")).collect();
                fp.graph.to_dot_with_labels("fiber_product", &labels)
            });
            if cli.json {
                let mut v = subgroup_json(&meet);
                if let Some(d) = fp_dot {
                    v["dot"] = json!(d);
                }
                writeln!(out, "{v}").unwrap();
            } else {
                out.push_str(&aligned(&subgroup_rows(&meet)));
                if let Some(d) = fp_dot {
                    out.push_str(&d);
                }
            }
        }
        Command::Join { h, k } => {
            let (h, k) = (read_subgroup(&h)?, read_subgroup(&k)?);
            let join = product::join(&h, &k).map_err(usage)?;
            if cli.json {
                writeln!(out, "{}", subgroup_json(&join)).unwrap();
            } else {
                out.push_str(&aligned(&subgroup_rows(&join)));
            }
        }
        Command::Pushout { h, k, dot } => {
            let (h, k) = (read_subgroup(&h)?, read_subgroup(&k)?);
            let meet = product::based_fiber_product(&h, &k).map_err(usage)?.based_core();
            let t = product::topological_pushout(&h, &k, std::slice::from_ref(&meet)).map_err(usage)?;
            let coincident = t.star_classes(h.graph(), k.graph()).count();
            let linked = t.linked_star_classes(h.graph(), k.graph(), &[meet]).count();
            let chi = t.graph.euler_characteristic();
            if cli.json {
                let mut v = json!({
                    "chi": chi,
                    "vertices": t.graph.vertex_count(),
                    "edges": t.graph.edge_count(),
                    "coincident_star_classes": coincident,
                    "linked_star_classes": linked,
                });
                if dot {
                    v["dot"] = json!(t.graph.to_dot("pushout"));
                }
                writeln!(out, "{v}").unwrap();
            } else {
                out.push_str(&aligned(&[
                    ("χ(𝒯)", chi.to_string()),
                    ("vertices", t.graph.vertex_count().to_string()),
                    ("edges", t.graph.edge_count().to_string()),
                    ("coincident star classes", coincident.to_string()),
                    ("linked star classes", linked.to_string()),
                ]));
                if dot {
                    out.push_str(&t.graph.to_dot("pushout"));
                }
            }
        }
        Command::Matrix { h, k } => {
            let (h, k) = (read_subgroup(&h)?, read_subgroup(&k)?);
            out.push_str(&matrix_command(&h, &k, cli.json)?);
        }
        Command::Check { h, k } => {
            let (h, k) = (read_subgroup(&h)?, read_subgroup(&k)?);
            let report = verify::check_instance(&h, &k).map_err(usage)?;
            if cli.json {
                writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes")).unwrap();
            } else {
                let mut rows = vec![
                    ("h", report.h.to_string()),
                    ("k", report.k.to_string()),
                    ("rank(H∩K)", report.rank_meet.to_string()),
                    ("rank(H∨K)", report.rank_join.to_string()),
                    ("χ(𝒯)", report.chi_t.to_string()),
                    ("χ(join)", report.chi_join.to_string()),
                    ("double cosets", format!("{:?}", report.double_coset_ranks)),
                ];
                if let Some((l, p, q)) = report.normal_form() {
                    rows.push(("ℓ p q", format!("{l} {p} {q}")));
                }
                for (name, v) in report.verdicts.named() {
                    let status = match v.status {
                        Status::Pass => "pass",
                        Status::Fail => "FAIL",
                        Status::NotApplicable => "n/a",
                    };
                    let slack = v.slack.map(|s| format!(" (slack {s})")).unwrap_or_default();
                    rows.push((name, format!("{status}{slack}")));
                }
                out.push_str(&aligned(&rows));
                if let Some(s) = &report.structure {
                    for v in &s.violations {
                        writeln!(out, "violation: {v}").unwrap();
                    }
                }
            }
            if report.failed() {
                return Err(Failure::Verdict(out));
            }
        }
        Command::Corpus => {
            let report = verify::run_corpus().map_err(usage)?;
            if cli.json {
                writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes")).unwrap();
            } else {
                for c in &report.checks {
                    writeln!(out, "{}  {}  {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail).unwrap();
                }
            }
            if !report.passed() {
                return Err(Failure::Verdict(out));
            }
        }
        Command::Fuzz {
            seed,
            count,
            min_rank,
            max_rank,
            max_len,
            exact_rank,
            shared,
            out: path,
            fixtures,
            sequential,
        } => {
            let seed = match std::env::var("STALLINGS_SEED") {
                Ok(s) => s.trim().parse().map_err(|_| Failure::Usage(format!("STALLINGS_SEED={s} is not a u64")))?,
                Err(_) => seed,
            };
            if min_rank == 0 || min_rank > max_rank || max_len == 0 {
                return Err(Failure::Usage("need 1 ≤ min-rank ≤ max-rank and max-len ≥ 1".into()));
            }
            let config =
                FuzzConfig { seed, count, min_gens: min_rank, max_gens: max_rank, max_len, exact_rank, shared };
            let report = if sequential { verify::fuzz_sequential(&config) } else { verify::fuzz(&config) };
            let lines = report.to_json_lines();
            match path {
                Some(p) => std::fs::write(&p, &lines).map_err(|e| usage(format!("{}: {e}", p.display())))?,
                None => out.push_str(&lines),
            }
            let summary = report.summary();
            let mut err = std::io::stderr().lock();
            if cli.json {
                writeln!(err, "{}", serde_json::to_string(&summary).expect("summary serializes")).ok();
            } else {
                writeln!(
                    err,
                    "{} instances, {} failed, {} errors",
                    summary.count,
                    summary.failed.len(),
                    summary.errors
                )
                .ok();
                for (name, [pass, fail, na]) in &summary.status_counts {
                    let slack = summary.min_slack.get(name).map(|s| format!("  min slack {s}")).unwrap_or_default();
                    writeln!(err, "{name:<14} pass {pass:>6}  fail {fail:>4}  n/a {na:>6}{slack}").ok();
                }
            }
            for (i, e) in &report.errors {
                writeln!(err, "instance {i}: {e}").ok();
            }
            if !report.passed() {
                let written = report.write_fixtures(&fixtures).map_err(usage)?;
                for p in written {
                    writeln!(err, "fixture {}", p.display()).ok();
                }
                return Err(Failure::Verdict(out));
            }
        }
    }
    Ok(out)
}

fn matrix_command(h: &Subgroup, k: &Subgroup, as_json: bool) -> Result<String, Failure> {
    let (h3, k3) = (h.three_regularize().map_err(usage)?, k.three_regularize().map_err(usage)?);
    let pair = subgroup::normalize_nonextremal(&h3, &k3).map_err(usage)?;
    let (h, k) = (&pair.h, &pair.k);
    let meet = product::based_fiber_product(h, k).map_err(usage)?.based_core();
    let t = product::topological_pushout(h, k, std::slice::from_ref(&meet)).map_err(usage)?;
    let stars = t.linked_star_classes(h.graph(), k.graph(), std::slice::from_ref(&meet));
    let m = matrix::incidence_matrix(h, k, &meet).map_err(usage)?;
    let nf = matrix::normal_form(&m, &stars).map_err(usage)?;
    let bound = matrix::entry_sum_bound(h.rank(), k.rank(), nf.ell(), nf.p, nf.q).ok();
    let delta = matrix::bipartite_delta(&m);
    let report = matrix::MatrixReport {
        h: h.rank(),
        k: k.rank(),
        ell: nf.ell(),
        p: nf.p,
        q: nf.q,
        entry_sum: m.entry_sum(),
        bound,
    };
    let mut out = String::new();
    if as_json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        v["conjugator"] = json!(pair.conjugator.to_string());
        v["rows"] = json!((0..m.rows())
            .map(|i| (0..m.cols()).map(|j| u8::from(m.get(i, j))).collect::<Vec<_>>())
            .collect::<Vec<_>>());
        v["normal_form"] = serde_json::to_value(&nf).expect("normal form serializes");
        v["delta"] = serde_json::to_value(delta).expect("summary serializes");
        writeln!(out, "{v}").unwrap();
    } else {
        out.push_str(&aligned(&[
            ("conjugator", pair.conjugator.to_string()),
            ("h k", format!("{} {}", report.h, report.k)),
            ("ℓ p q", format!("{} {} {}", report.ell, report.p, report.q)),
            ("entry-sum", report.entry_sum.to_string()),
            ("bound", bound.map_or("n/a".into(), |b| b.to_string())),
            ("Δ components", delta.component_count.to_string()),
            ("Δ edges", delta.edge_count.to_string()),
        ]));
        writeln!(out, "\nM").unwrap();
        out.push_str(&m.render());
        writeln!(out, "\nnormal form").unwrap();
        out.push_str(&nf.render(&m));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli) {
        Ok(out) => {
            stdout.write_all(out.as_bytes()).ok();
            ExitCode::SUCCESS
        }
        Err(Failure::Verdict(out)) => {
            stdout.write_all(out.as_bytes()).ok();
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
