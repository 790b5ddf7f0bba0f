use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use hered3_core::io;
use hered3_core::{pattern, solve as run_solver, Decision, SolveError, SolveOptions};
use hered3_testkit::generate::{self, batch, mix, Directed, GeneratorKind, GeneratorSpec, Named};
use hered3_testkit::{count_proper_3colorings, differential_fuzz, Budget};

use crate::input::{self, CliError, Loaded};
use crate::report::{InputInfo, PatternInfo, Report, Stats, WitnessEntry};
use crate::{exit, DirectedArg, FuzzArgs, GenerateArgs, InputArgs, KindArg, NamedArg};

/// Enumeration is exponential; past this size `count-colorings` warns.
const COUNT_SOFT_LIMIT: usize = 20;

fn load(args: &InputArgs) -> Result<(Loaded, Report), CliError> {
    let loaded = input::load(args)?;
    let mut report = Report {
        warnings: loaded.doc.warnings.clone(),
        ..Report::new("", InputInfo::of(&loaded.doc, &loaded.source), "")
    };
    if !loaded.doc.palettes.is_empty() {
        report
            .warnings
            .push(format!("{} palette annotations ignored", loaded.doc.palettes.len()));
    }
    Ok((loaded, report))
}

pub fn solve(args: &InputArgs, witness: bool, assume_class: bool) -> Result<u8, CliError> {
    let (Loaded { doc, .. }, mut report) = load(args)?;
    report.command = "solve";
    let opts = SolveOptions {
        witness,
        assume_class,
        ..SolveOptions::default()
    };
    let start = Instant::now();
    let code = match run_solver(&doc.graph, &opts) {
        Ok(r) => {
            report.stats = Stats::of(&r.stats);
            report.obstruction = r.obstruction.as_ref().map(|w| PatternInfo::of(w, &doc.labels));
            report.witness = r.witness.map(|w| {
                doc.graph
                    .vertices()
                    .map(|v| WitnessEntry {
                        vertex: doc.labels[v.index()].clone(),
                        color: w[v.index()].get(),
                    })
                    .collect()
            });
            match r.decision {
                Decision::Colorable => {
                    report.decision = "colorable";
                    exit::OK
                }
                Decision::NotColorable => {
                    report.decision = "not_colorable";
                    exit::NOT_COLORABLE
                }
            }
        }
        Err(SolveError::ClassViolation(w)) => {
            report.decision = "class_violation";
            report.class_witness = Some(PatternInfo::of(&w, &doc.labels));
            report.stats.millis = start.elapsed().as_millis() as u64;
            exit::CLASS_VIOLATION
        }
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    report.print(args.json);
    Ok(code)
}

pub fn check_class(args: &InputArgs) -> Result<u8, CliError> {
    let (Loaded { doc, .. }, mut report) = load(args)?;
    report.command = "check-class";
    let start = Instant::now();
    let found = pattern::check_class(&doc.graph);
    report.stats.millis = start.elapsed().as_millis() as u64;
    let code = match found {
        None => {
            report.decision = "in_class";
            exit::OK
        }
        Some(w) => {
            report.decision = "class_violation";
            report.class_witness = Some(PatternInfo::of(&w, &doc.labels));
            exit::CLASS_VIOLATION
        }
    };
    report.print(args.json);
    Ok(code)
}

pub fn count_colorings(args: &InputArgs) -> Result<u8, CliError> {
    let (Loaded { doc, .. }, mut report) = load(args)?;
    report.command = "count-colorings";
    let n = doc.graph.vertex_count();
    if n > COUNT_SOFT_LIMIT {
        report
            .warnings
            .push(format!("{n} vertices: enumeration may take a very long time"));
    }
    let start = Instant::now();
    let count = count_proper_3colorings(&doc.graph);
    report.stats.millis = start.elapsed().as_millis() as u64;
    report.count = Some(count);
    report.decision = if count > 0 { "colorable" } else { "not_colorable" };
    report.print(args.json);
    Ok(if count > 0 { exit::OK } else { exit::NOT_COLORABLE })
}

fn named(n: NamedArg) -> Named {
    match n {
        NamedArg::Petersen => Named::Petersen,
        NamedArg::K4 => Named::K4,
        NamedArg::CoC7 => Named::CoC7,
        NamedArg::C5 => Named::C5,
        NamedArg::C7 => Named::C7,
        NamedArg::C9 => Named::C9,
    }
}

fn directed(d: DirectedArg) -> Directed {
    match d {
        DirectedArg::RiBranch => Directed::RiBranch,
        DirectedArg::SPair => Directed::SPair,
        DirectedArg::SingleCut => Directed::SingleCut,
    }
}

fn kind_name(k: KindArg) -> String {
    k.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn generator_kind(a: &GenerateArgs) -> Result<GeneratorKind, CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Invalid(format!("--kind {} needs --{flag}", kind_name(a.kind))));
    Ok(match a.kind {
        KindArg::ErdosRenyi => GeneratorKind::ErdosRenyi { n: need(a.n, "n")?, p: a.p },
        KindArg::C7Gadget => GeneratorKind::C7Gadget {
            extra: need(a.extra, "extra")?,
            p: a.p,
            directed: a.directed.map(directed),
        },
        KindArg::C9Gadget => GeneratorKind::C9Gadget {
            extra: need(a.extra, "extra")?,
            p: a.p,
        },
        KindArg::CographComposite => GeneratorKind::CographComposite { n: need(a.n, "n")? },
        KindArg::Named => GeneratorKind::Named(named(
            a.name.ok_or_else(|| CliError::Invalid("--kind named needs --name".into()))?,
        )),
    })
}

pub fn generate(a: &GenerateArgs) -> Result<u8, CliError> {
    let spec = GeneratorSpec {
        kind: generator_kind(a)?,
        seed: a.seed,
    };
    let g = generate::generate(&spec).map_err(|e| CliError::Invalid(e.to_string()))?;
    let text = io::print(&g, &BTreeMap::new(), input::format_of(a.format));
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    Ok(exit::OK)
}

/// `8..16`, `8..=16` or `8,10,12`.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Invalid(format!("bad --sizes `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let sizes: Vec<usize> = if let Some((lo, hi)) = s.split_once("..=") {
        (num(lo)?..=num(hi)?).collect()
    } else if let Some((lo, hi)) = s.split_once("..") {
        (num(lo)?..num(hi)?).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if sizes.is_empty() || sizes.iter().any(|&n| n == 0) {
        return Err(bad());
    }
    Ok(sizes)
}

/// A case count, or seconds with an `s` suffix.
pub fn parse_budget(s: &str) -> Result<Budget, CliError> {
    let bad = || CliError::Invalid(format!("bad --budget `{s}`"));
    match s.strip_suffix('s') {
        Some(secs) => Ok(Budget::time(Duration::from_secs_f64(secs.parse().map_err(|_| bad())?))),
        None => Ok(Budget::cases(s.parse().map_err(|_| bad())?)),
    }
}

/// Specs for the fuzz command: random graphs at three densities, plus C7 and
/// C9 gadgets where the size allows.
pub fn fuzz_specs(seed: u64, sizes: &[usize], count: usize) -> Vec<GeneratorSpec> {
    let mut kinds = Vec::new();
    for &n in sizes {
        for p in [0.15, 0.25, 0.4] {
            kinds.push(GeneratorKind::ErdosRenyi { n, p });
        }
        if n > 7 {
            kinds.push(GeneratorKind::C7Gadget {
                extra: n - 7,
                p: 0.3,
                directed: None,
            });
        }
        if n > 9 {
            kinds.push(GeneratorKind::C9Gadget { extra: n - 9, p: 0.3 });
        }
    }
    (0..count)
        .map(|i| {
            let kind = &kinds[i % kinds.len()];
            batch(kind, mix(seed, i as u64), 1).pop().expect("one spec")
        })
        .collect()
}

/// Specs queued for a time-limited run.
const TIMED_POOL: usize = 1 << 20;

pub fn fuzz(a: &FuzzArgs) -> Result<u8, CliError> {
    let budget = parse_budget(&a.budget)?;
    let sizes = parse_sizes(&a.sizes)?;
    let specs = fuzz_specs(a.seed, &sizes, budget.max_cases.unwrap_or(TIMED_POOL));
    let mut r = differential_fuzz(&specs, budget);
    if budget.max_cases.is_none() {
        r.skipped = 0;
    }
    let mut report = Report::new(
        "fuzz",
        InputInfo {
            source: format!("generated seed {} sizes {}", a.seed, a.sizes),
            format: None,
            vertices: 0,
            edges: 0,
        },
        if r.is_clean() { "clean" } else { "failures" },
    );
    report.stats = Stats {
        branches: r.core_branches,
        reductions: 0,
        millis: r.millis,
    };
    if a.json {
        report.fuzz = Some(serde_json::to_value(&r).expect("fuzz report serializes"));
        report.print(true);
    } else {
        report.print(false);
        let mut out = String::new();
        let _ = writeln!(out, "c cases {} skipped {}", r.cases, r.skipped);
        let _ = writeln!(out, "c class members {} ({:.3} of cases)", r.class_members, r.class_pass_rate());
        let _ = writeln!(out, "c generator pass rate {:.3}", r.generator_pass_rate());
        let _ = writeln!(out, "c colorable {}", r.colorable);
        let _ = writeln!(out, "c mismatches {} violations {}", r.mismatches.len(), r.violations.len());
        for m in &r.mismatches {
            let _ = writeln!(out, "c mismatch {:?}: solver {:?} oracle {:?}", m.spec, m.solver, m.oracle);
        }
        for v in &r.violations {
            let _ = writeln!(out, "c violation {:?} {:?}: {}", v.kind, v.spec, v.detail);
        }
        for f in &r.soundness.failures {
            let _ = writeln!(out, "c unsound {:?}: {}", f.kind, f.detail);
        }
        let _ = std::io::stdout().lock().write_all(out.as_bytes());
    }
    Ok(if r.is_clean() { exit::OK } else { exit::NOT_COLORABLE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hered3_core::io::Format;

    #[test]
    fn sizes_and_budgets() {
        assert_eq!(parse_sizes("8..=10").unwrap(), vec![8, 9, 10]);
        assert_eq!(parse_sizes("8..10").unwrap(), vec![8, 9]);
        assert_eq!(parse_sizes("5,7").unwrap(), vec![5, 7]);
        assert!(parse_sizes("x").is_err());
        assert!(parse_sizes("9..9").is_err());
        assert_eq!(parse_budget("50").unwrap(), Budget::cases(50));
        assert_eq!(parse_budget("2s").unwrap(), Budget::time(Duration::from_secs(2)));
        assert!(parse_budget("fast").is_err());
    }

    #[test]
    fn fuzz_specs_are_reproducible() {
        let a = fuzz_specs(3, &[8, 12], 40);
        assert_eq!(a, fuzz_specs(3, &[8, 12], 40));
        assert_eq!(a.len(), 40);
    }

    #[test]
    fn format_default_is_edge_list() {
        assert_eq!(input::format_of(crate::FormatArg::EdgeList), Format::EdgeList);
    }
}
