mod parse;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use equihopf::branches::{count_submaximal, figure_geometry, solve_z1z2, solve_zz_x, BranchSolution, Classification};
use equihopf::group::{all_subgroups, conjugacy_classes, element_order, lattice_dot, FiniteGroup, GroupElement, GroupKind};
use equihopf::hmodk::{
    catalog_row, catalog_table_text, classify_unrealizable, enumerate_pairs, hopf_catalog, pair_row, pairs_table_text,
    CatalogRow, PairRow, Reading,
};
use equihopf::odeverify::{verify_row, OdeError, VerifyConfig, DEFAULT_SYMMETRY_TOL};
use equihopf::twisted::{
    check_denominator, enumerate_isotropy, generator_words_in, isotropy_dot, row_name, IsotropyConfig,
    DEFAULT_ISOTROPY_SEED, DEFAULT_PHASE_DENOMINATOR,
};

use parse::parse_complex;

#[derive(Parser, Debug)]
#[command(name = "equihopf", version, about = "Hopf bifurcation with tetrahedral and octahedral symmetry")]
struct Cli {
    /// tetra-full, octa-rot or octa-full
    #[arg(long, global = true, default_value = "tetra-full")]
    group: String,
    #[arg(long, global = true, default_value_t = DEFAULT_PHASE_DENOMINATOR)]
    phase_denominator: u32,
    /// α/β; sets α to this value and β to 1
    #[arg(long, global = true, allow_hyphen_values = true)]
    ratio: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Symmetry tolerance for `verify`
    #[arg(long, global = true, default_value_t = DEFAULT_SYMMETRY_TOL)]
    tol: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_ISOTROPY_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, conjugacy classes, generator orders and subgroup lattice
    Group,
    /// Isotropy subgroups of Γ×S¹ with fixed-point subspaces
    Isotropy,
    /// Admissible (H, K) pairs
    Hmodk,
    /// Symmetries of primary Hopf branches and pairs they never realize
    Hopf,
    /// Branch equations in the four-dimensional subspaces
    Branches,
    /// Integrate one branch and detect its (H, K)
    Verify {
        /// Row letter a–h
        #[arg(long, default_value = "c")]
        row: char,
        /// Skip the transient and start on the computed orbit
        #[arg(long, default_value_t = 0.0)]
        transient: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
    Svg,
}

enum Failure {
    Input(anyhow::Error),
    Numeric(anyhow::Error),
}

type Outcome = Result<String, Failure>;

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn numeric<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Numeric(e.into())
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    Failure::Input(anyhow!("format {f:?} is not available for `{cmd}`"))
}

fn json<T: Serialize>(v: &T) -> Outcome {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(numeric)
}

struct Settings {
    kind: GroupKind,
    n: u32,
    alpha: Complex64,
    beta: Complex64,
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let kind = GroupKind::from_selector(&cli.group).map_err(input)?;
    check_denominator(cli.phase_denominator).map_err(input)?;
    let parse = |s: &str| parse_complex(s).map_err(|e| input(anyhow!(e)));
    let (alpha, beta) = match (&cli.ratio, &cli.alpha) {
        (Some(_), Some(_)) => return Err(input(anyhow!("give either --ratio or --alpha, not both"))),
        (Some(r), None) => (parse(r)?, Complex64::new(1.0, 0.0)),
        (None, Some(a)) => (
            parse(a)?,
            cli.beta.as_deref().map(parse).transpose()?.unwrap_or(Complex64::new(1.0, 0.0)),
        ),
        (None, None) => (
            Complex64::new(0.0, 2.0),
            cli.beta.as_deref().map(parse).transpose()?.unwrap_or(Complex64::new(1.0, 0.0)),
        ),
    };
    if !(cli.tol > 0.0) {
        return Err(input(anyhow!("--tol must be positive")));
    }
    Ok(Settings {
        kind,
        n: cli.phase_denominator,
        alpha,
        beta,
    })
}

#[derive(Serialize)]
struct GroupReport {
    group: &'static str,
    order: usize,
    generator_orders: Vec<(String, usize)>,
    conjugacy_classes: Vec<ClassEntry>,
    subgroup_classes: usize,
}

#[derive(Serialize)]
struct ClassEntry {
    representative: String,
    size: usize,
    element_order: usize,
}

fn cmd_group(cli: &Cli, s: &Settings) -> Outcome {
    let g = s.kind.build();
    let classes = all_subgroups(&g);
    if cli.format == Format::Dot {
        return Ok(lattice_dot(&g, &classes, s.kind.display_name()));
    }
    let named = [
        ("R", GroupElement::r()),
        ("C", GroupElement::c()),
        ("κ", GroupElement::kappa()),
        ("T", GroupElement::t()),
    ];
    let report = GroupReport {
        group: s.kind.selector(),
        order: g.order(),
        generator_orders: named.iter().map(|(n, e)| (n.to_string(), element_order(e))).collect(),
        conjugacy_classes: conjugacy_classes(&g)
            .iter()
            .map(|c| ClassEntry {
                representative: g.word_string(c[0]),
                size: c.len(),
                element_order: element_order(g.element(c[0])),
            })
            .collect(),
        subgroup_classes: classes.len(),
    };
    match cli.format {
        Format::Json => json(&report),
        Format::Text => {
            let mut out = format!("group {} ({})\norder {}\n", report.group, s.kind.display_name(), report.order);
            let orders: Vec<String> = report.generator_orders.iter().map(|(n, o)| format!("{n}:{o}")).collect();
            let _ = writeln!(out, "generator orders {}", orders.join(" "));
            let _ = writeln!(out, "conjugacy classes {}", report.conjugacy_classes.len());
            for c in &report.conjugacy_classes {
                let _ = writeln!(out, "  {:<14} size {:>2}  order {}", c.representative, c.size, c.element_order);
            }
            let _ = writeln!(out, "subgroup classes {}", report.subgroup_classes);
            Ok(out)
        }
        f => Err(unsupported("group", f)),
    }
}

#[derive(Serialize)]
struct IsotropyRow {
    row: char,
    name: &'static str,
    real_dim: usize,
    fix: String,
    c_axial: bool,
    conjugates: usize,
    generators: Vec<(&'static str, Vec<String>)>,
}

fn isotropy_config(cli: &Cli, s: &Settings) -> IsotropyConfig {
    IsotropyConfig {
        n: s.n,
        seed: cli.seed,
        ..IsotropyConfig::default()
    }
}

fn cmd_isotropy(cli: &Cli, s: &Settings) -> Outcome {
    let g = s.kind.build();
    let res = enumerate_isotropy(&g, &isotropy_config(cli, s)).map_err(input)?;
    if cli.format == Format::Dot {
        return Ok(isotropy_dot(&g, &res.records, s.kind.display_name()));
    }
    let rows: Vec<IsotropyRow> = res
        .records
        .iter()
        .map(|r| IsotropyRow {
            row: r.row,
            name: row_name(r.row),
            real_dim: r.fix.real_dim,
            fix: r.fix.pattern(),
            c_axial: r.c_axial,
            conjugates: r.conjugates,
            generators: GroupKind::ALL
                .iter()
                .map(|&k| {
                    let words = match &r.sigma {
                        Some(sigma) => generator_words_in(&g, sigma, k),
                        None => vec!["Γ×S¹".to_string()],
                    };
                    (k.selector(), words)
                })
                .collect(),
        })
        .collect();
    match cli.format {
        Format::Json => json(&rows),
        Format::Text => {
            let mut out = format!("isotropy of {}×S¹, N = {}\n", s.kind.display_name(), s.n);
            for r in &rows {
                let gens: Vec<String> = r.generators.iter().map(|(k, w)| format!("{k}: {{{}}}", w.join(","))).collect();
                let _ = writeln!(
                    out,
                    "({}) dim {} {:<18} {:<8} {}",
                    r.row,
                    r.real_dim,
                    r.fix,
                    if r.c_axial { "C-axial" } else { "" },
                    gens.join("  ")
                );
            }
            Ok(out)
        }
        f => Err(unsupported("isotropy", f)),
    }
}

#[derive(Serialize)]
struct PairsReport {
    group: &'static str,
    pairs: Vec<PairRow>,
    nontrivial_k: usize,
    trivial_k_count: Option<usize>,
}

fn cmd_hmodk(cli: &Cli, s: &Settings) -> Outcome {
    let g = s.kind.build();
    let pe = enumerate_pairs(&g, s.n);
    match cli.format {
        Format::Text => Ok(pairs_table_text(&g, &pe)),
        Format::Json => json(&PairsReport {
            group: s.kind.selector(),
            nontrivial_k: pe.nontrivial_k().count(),
            trivial_k_count: pe.trivial_k_count,
            pairs: pe.pairs.iter().map(|p| pair_row(&g, p)).collect(),
        }),
        Format::Csv => {
            let mut out = String::from("k,k_generators,h,h_generators,fix_k,dim,quotient_order,note\n");
            for p in &pe.pairs {
                let r = pair_row(&g, p);
                let _ = writeln!(
                    out,
                    "{},\"{}\",{},\"{}\",\"{}\",{},{},{}",
                    r.k_name,
                    r.k_generators.join(","),
                    r.h_name,
                    r.h_generators.join(","),
                    r.fix_k,
                    r.dim,
                    r.quotient_order,
                    r.note.unwrap_or_default()
                );
            }
            Ok(out)
        }
        f => Err(unsupported("hmodk", f)),
    }
}

#[derive(Serialize)]
struct HopfReport {
    group: &'static str,
    catalog: Vec<CatalogRow>,
    unrealizable_full: Vec<PairRow>,
    unrealizable_reduced: Vec<PairRow>,
}

fn cmd_hopf(cli: &Cli, s: &Settings) -> Outcome {
    let g = s.kind.build();
    let cat = hopf_catalog(&g, &isotropy_config(cli, s)).map_err(input)?;
    let pe = enumerate_pairs(&g, s.n);
    let unreal = |reading| -> Vec<PairRow> {
        classify_unrealizable(&g, &pe, &cat, reading)
            .iter()
            .map(|p| pair_row(&g, p))
            .collect()
    };
    let report = HopfReport {
        group: s.kind.selector(),
        catalog: cat.iter().map(|r| catalog_row(&g, r)).collect(),
        unrealizable_full: unreal(Reading::Full),
        unrealizable_reduced: unreal(Reading::Reduced),
    };
    match cli.format {
        Format::Json => json(&report),
        Format::Text => {
            let mut out = catalog_table_text(&g, &cat);
            let mut list = |title: &str, rows: &[PairRow]| {
                let _ = writeln!(out, "\n{title}: {}", rows.len());
                for r in rows {
                    let _ = writeln!(
                        out,
                        "  H = {} {{{}}}  K = {} {{{}}}",
                        r.h_name,
                        r.h_generators.join(","),
                        r.k_name,
                        r.k_generators.join(",")
                    );
                }
            };
            if g.contains_minus_id() {
                list("pairs with K ≠ 1 never realized (full reading)", &report.unrealizable_full);
                list("pairs with K ≠ 1 never realized (reduced reading)", &report.unrealizable_reduced);
            } else {
                list("pairs never realized", &report.unrealizable_full);
            }
            Ok(out)
        }
        f => Err(unsupported("hopf", f)),
    }
}

#[derive(Serialize)]
struct BranchReport {
    alpha: (f64, f64),
    beta: (f64, f64),
    ratio: (f64, f64),
    z1z2_0: Vec<BranchSolution>,
    zz_x: Vec<BranchSolution>,
    submaximal: usize,
    tangency: bool,
}

fn cmd_branches(cli: &Cli, s: &Settings) -> Outcome {
    let z1z2 = solve_z1z2(s.alpha, s.beta).map_err(input)?;
    let zzx = solve_zz_x(s.alpha, s.beta).map_err(input)?;
    let ratio = s.alpha / s.beta;
    let report = BranchReport {
        alpha: (s.alpha.re, s.alpha.im),
        beta: (s.beta.re, s.beta.im),
        ratio: (ratio.re, ratio.im),
        submaximal: count_submaximal(&zzx),
        tangency: zzx.iter().any(|x| x.classification == Classification::Tangency),
        z1z2_0: z1z2,
        zz_x: zzx,
    };
    match cli.format {
        Format::Json => json(&report),
        Format::Csv => Ok(figure_geometry(ratio).to_csv()),
        Format::Svg => Ok(figure_geometry(ratio).to_svg()),
        Format::Text => {
            let mut out = format!("α/β = {:.6}{:+.6}i\n", ratio.re, ratio.im);
            let mut block = |title: &str, sols: &[BranchSolution]| {
                let _ = writeln!(out, "{title}: {} solutions", sols.len());
                for x in sols {
                    let _ = writeln!(
                        out,
                        "  ξ = {:.9}{:+.9}i  angle {:.9}  r² {:.9}  residual {:.1e}  {}",
                        x.xi.re, x.xi.im, x.angle, x.r_squared, x.residual, x.classification
                    );
                }
            };
            block("{(ξz,z,0)}", &report.z1z2_0);
            block("{(z,z,ξz)}", &report.zz_x);
            let _ = writeln!(out, "submaximal branches in {{(z,z,ξz)}}: {}", report.submaximal);
            if report.tangency {
                let _ = writeln!(out, "tangency: intersection points coalesce");
            }
            Ok(out)
        }
        f => Err(unsupported("branches", f)),
    }
}

#[derive(Serialize)]
struct VerifyReport {
    group: &'static str,
    row: char,
    lambda: (f64, f64),
    alpha: (f64, f64),
    beta: (f64, f64),
    gamma: (f64, f64),
    period: f64,
    closure_error: f64,
    amplitude: f64,
    detected: equihopf::odeverify::DetectedSymmetry,
    h_words: Vec<String>,
    k_words: Vec<String>,
}

fn words(g: &FiniteGroup, s: &equihopf::group::Subgroup) -> Vec<String> {
    let gens = g.generators_of(s);
    if gens.is_empty() {
        return vec!["Id".into()];
    }
    gens.iter().map(|&i| g.word_string(i)).collect()
}

fn cmd_verify(cli: &Cli, s: &Settings, row: char, transient: f64) -> Outcome {
    if !('a'..='i').contains(&row) {
        return Err(input(anyhow!("row must be a letter a–i, got {row:?}")));
    }
    if s.beta.norm() == 0.0 {
        return Err(input(anyhow!("β = 0: the branch equations degenerate")));
    }
    let config = VerifyConfig {
        transient,
        ..VerifyConfig::default()
    };
    let run = match verify_row(s.kind, row, s.alpha, s.beta, s.n, cli.tol, &config) {
        Ok(r) => r,
        Err(OdeError::Equilibrium { .. }) if row == 'a' => {
            return match cli.format {
                Format::Json => json(&serde_json::json!({"row": "a", "equilibrium": true})),
                _ => Ok("row (a): the origin is an equilibrium, not a periodic orbit\n".into()),
            };
        }
        Err(e) => return Err(numeric(e)),
    };
    let g = s.kind.build();
    let p = run.params;
    let report = VerifyReport {
        group: s.kind.selector(),
        row,
        lambda: (p.lambda.re, p.lambda.im),
        alpha: (p.alpha.re, p.alpha.im),
        beta: (p.beta.re, p.beta.im),
        gamma: (p.gamma.re, p.gamma.im),
        period: run.orbit.period,
        closure_error: run.orbit.closure_error,
        amplitude: run.orbit.amplitude(),
        h_words: words(&g, &run.detected.h),
        k_words: words(&g, &run.detected.k),
        detected: run.detected,
    };
    match cli.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("group,h,k,h_order,k_order\n");
            for i in &report.detected.interpretations {
                let _ = writeln!(
                    out,
                    "{},\"{}\",\"{}\",{},{}",
                    i.group.selector(),
                    i.h.join(","),
                    i.k.join(","),
                    i.h_order,
                    i.k_order
                );
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = format!("row ({row}) in {}\n", s.kind.display_name());
            let _ = writeln!(
                out,
                "λ = {:.3}{:+.3}i  α = {:.3}{:+.3}i  β = {:.3}{:+.3}i  γ = {:.3}{:+.3}i",
                p.lambda.re, p.lambda.im, p.alpha.re, p.alpha.im, p.beta.re, p.beta.im, p.gamma.re, p.gamma.im
            );
            let _ = writeln!(
                out,
                "period {:.9}  closure {:.1e}  amplitude {:.9}",
                report.period, report.closure_error, report.amplitude
            );
            let _ = writeln!(
                out,
                "H = {{{}}}  K = {{{}}}  (|H| = {}, |K| = {})",
                report.h_words.join(","),
                report.k_words.join(","),
                report.detected.h.order(),
                report.detected.k.order()
            );
            for m in &report.detected.h_members {
                let _ = writeln!(out, "  {:<14} shift {:.6}  score {:.1e}", m.element, m.shift, m.score);
            }
            let _ = writeln!(out, "interpretations:");
            for i in &report.detected.interpretations {
                let _ = writeln!(
                    out,
                    "  {:<10} H = {{{}}}  K = {{{}}}",
                    i.group.selector(),
                    i.h.join(","),
                    i.k.join(",")
                );
            }
            Ok(out)
        }
        f => Err(unsupported("verify", f)),
    }
}

fn run(cli: &Cli) -> Outcome {
    let s = settings(cli)?;
    match &cli.command {
        Command::Group => cmd_group(cli, &s),
        Command::Isotropy => cmd_isotropy(cli, &s),
        Command::Hmodk => cmd_hmodk(cli, &s),
        Command::Hopf => cmd_hopf(cli, &s),
        Command::Branches => cmd_branches(cli, &s),
        Command::Verify { row, transient } => cmd_verify(cli, &s, *row, *transient),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(input),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("numeric failure: {e:#}");
            ExitCode::from(3)
        }
    }
}
