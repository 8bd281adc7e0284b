//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Reference data (group words, fixed-point forms, pair lists, branch counts,
//! golden ratios) is transcribed by hand and checked against the library up
//! to conjugacy, never by string comparison with library output.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equihopf::branches::{
    classify_intersections, count_submaximal, curve_coefficients, intersect_circle, solve_z1z2, solve_zz_x,
    zz_x_residual, z1z2_residual, BranchSolution, Classification,
};
use equihopf::exact::{CycloVector, CyclotomicField};
use equihopf::group::{element_order, normalizer, FiniteGroup, GroupElement, GroupKind, Subgroup};
use equihopf::hmodk::{
    classify_unrealizable, enumerate_pairs, hopf_catalog, pairs_conjugate, HopfBranchRecord, Reading,
};
use equihopf::normalform::{eval_vf, jacobian_origin, restrict, NFParams, C3};
use equihopf::odeverify::{verify_row, VerifyConfig, DEFAULT_SYMMETRY_TOL};
use equihopf::twisted::{
    enumerate_isotropy, fix_of_subgroup, full_twisted_group, twisted_group_equal, FixSubspace, IsotropyConfig,
    TwistedElement, TwistedSubgroup,
};

const N: u32 = 24;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------- words

fn letter(c: char) -> GroupElement {
    match c {
        'C' => GroupElement::c(),
        'R' => GroupElement::r(),
        'κ' => GroupElement::kappa(),
        'T' => GroupElement::t(),
        _ => panic!("unknown letter {c}"),
    }
}

/// A word such as `-T^2C^2TC` or `C^2Rκ`, read as a left-to-right matrix product.
fn word(w: &str) -> GroupElement {
    let w = w.trim();
    if w == "Id" {
        return GroupElement::identity();
    }
    let (neg, body) = match w.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, w),
    };
    let chars: Vec<char> = if body == "Id" { Vec::new() } else { body.chars().collect() };
    let mut acc = GroupElement::identity();
    let mut i = 0;
    while i < chars.len() {
        let g = letter(chars[i]);
        i += 1;
        let mut power = 1;
        if i < chars.len() && chars[i] == '^' {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            power = chars[start..end].iter().collect::<String>().parse().unwrap();
            i = end;
        }
        for _ in 0..power {
            acc = acc.mul(&g);
        }
    }
    if neg {
        acc.neg()
    } else {
        acc
    }
}

fn subgroup(group: &FiniteGroup, words: &str) -> Subgroup {
    let elems: Vec<GroupElement> = words.split(',').map(word).collect();
    group
        .generated_by_elements(&elems)
        .unwrap_or_else(|| panic!("{words} not in group"))
}

fn twisted(group: &FiniteGroup, gens: &[(i64, &str)]) -> TwistedSubgroup {
    let elems: Vec<TwistedElement> = gens.iter().map(|&(k, w)| TwistedElement::new(word(w), k, N)).collect();
    TwistedSubgroup::generated(group, &elems, N).expect("reference generators form a graph subgroup")
}

// ---------------------------------------------------------------- reference data

const KINDS: [GroupKind; 3] = GroupKind::ALL;

/// Isotropy generators per row (b)–(h), phases in steps of 2π/24.
fn isotropy_generators(kind: GroupKind) -> Vec<(char, Vec<(i64, &'static str)>)> {
    match kind {
        GroupKind::TetraFull => vec![
            ('b', vec![(12, "C^2RC"), (0, "κ")]),
            ('c', vec![(0, "C"), (0, "κ")]),
            ('d', vec![(-8, "C")]),
            ('e', vec![(12, "R"), (0, "κ")]),
            ('f', vec![(6, "C^2Rκ")]),
            ('g', vec![(12, "R")]),
            ('h', vec![(0, "κ")]),
            ('i', vec![(0, "Id")]),
        ],
        GroupKind::OctaRot => vec![
            ('b', vec![(0, "TC^2"), (12, "T^2")]),
            ('c', vec![(0, "C"), (12, "T^2C^2T")]),
            ('d', vec![(-8, "C")]),
            ('e', vec![(12, "TC^2TC^2"), (0, "T^3C^2")]),
            ('f', vec![(-6, "T")]),
            ('g', vec![(12, "TC^2TC^2")]),
            ('h', vec![(12, "T^2C^2TC")]),
            ('i', vec![(0, "Id")]),
        ],
        GroupKind::OctaFull => vec![
            ('b', vec![(0, "TC^2"), (0, "-T^2")]),
            ('c', vec![(0, "C"), (0, "-T^2C^2T")]),
            ('d', vec![(-8, "C")]),
            ('e', vec![(0, "-TC^2TC^2"), (0, "T^3C^2")]),
            ('f', vec![(-6, "T")]),
            ('g', vec![(0, "-TC^2TC^2")]),
            ('h', vec![(0, "-T^2C^2TC")]),
            ('i', vec![(0, "Id")]),
        ],
    }
}

/// Full isotropy subgroup from the listed generators; with −Id in Γ the
/// trivially acting (−Id, ½) is added back.
fn reference_sigma(group: &FiniteGroup, gens: &[(i64, &str)]) -> TwistedSubgroup {
    let mut g = gens.to_vec();
    if group.contains_minus_id() {
        g.push((12, "-Id"));
    }
    twisted(group, &g)
}

fn fix_form(field: &CyclotomicField, row: char) -> Option<FixSubspace> {
    let (z, o) = (field.zero(), field.one());
    let w = field.zeta_pow(8);
    let w2 = field.zeta_pow(16);
    let i = field.zeta_pow(6);
    let vecs: Vec<CycloVector> = match row {
        'b' => vec![vec![o, z.clone(), z]],
        'c' => vec![vec![o.clone(), o.clone(), o]],
        'd' => vec![vec![o, w, w2]],
        'e' => vec![vec![z, o.clone(), o]],
        'f' => vec![vec![o, i, z]],
        'g' => vec![vec![z.clone(), o.clone(), z.clone()], vec![z.clone(), z, o]],
        'h' => vec![vec![o.clone(), z.clone(), z.clone()], vec![z, o.clone(), o]],
        'i' => return Some(FixSubspace::whole(field)),
        _ => return None,
    };
    Some(FixSubspace::from_vectors(field, &vecs))
}

/// (H, K) and branch count per row (b)–(h), in the alphabet of `kind`.
fn hopf_table(kind: GroupKind) -> Vec<(char, &'static str, &'static str, usize)> {
    match kind {
        GroupKind::TetraFull => vec![
            ('b', "C^2RC,κ", "R,κ", 3),
            ('c', "C,κ", "C,κ", 4),
            ('d', "C", "Id", 8),
            ('e', "R,κ", "κ", 6),
            ('f', "C^2Rκ", "Id", 6),
            ('g', "R", "Id", 12),
            ('h', "κ", "κ", 12),
        ],
        GroupKind::OctaRot => vec![
            ('b', "TC^2,T^2", "TC^2", 3),
            ('c', "C,T^2C^2T", "C", 4),
            ('d', "C", "Id", 8),
            ('e', "TC^2TC^2,T^3C^2", "T^3C^2", 6),
            ('f', "T", "Id", 6),
            ('g', "TC^2TC^2", "Id", 12),
            ('h', "T^2C^2TC", "Id", 12),
        ],
        GroupKind::OctaFull => vec![
            ('b', "TC^2,-T^2", "TC^2,-T^2", 3),
            ('c', "C,-T^2C^2T", "C,-T^2C^2T", 4),
            ('d', "C", "Id", 8),
            ('e', "-TC^2TC^2,T^3C^2", "-TC^2TC^2,T^3C^2", 6),
            ('f', "T", "Id", 6),
            ('g', "-TC^2TC^2", "-TC^2TC^2", 24),
            ('h', "-T^2C^2TC", "-T^2C^2TC", 24),
        ],
    }
}

/// Admissible (K, H) pairs.
fn pair_table(kind: GroupKind) -> Vec<(&'static str, &'static str)> {
    match kind {
        GroupKind::TetraFull => vec![
            ("R,κ", "R,κ"),
            ("R,κ", "C^2RC,κ"),
            ("C,κ", "C,κ"),
            ("κ", "κ"),
            ("κ", "R,κ"),
            ("Id", "C^2Rκ"),
            ("Id", "C"),
            ("Id", "R"),
            ("Id", "κ"),
            ("Id", "Id"),
        ],
        GroupKind::OctaRot => vec![
            ("TC^2", "TC^2"),
            ("TC^2", "T^2,TC^2"),
            ("C", "C"),
            ("C", "C,T^2C^2T"),
            ("T^3C^2", "T^3C^2"),
            ("T^3C^2", "TC^2TC^2,T^3C^2"),
            ("Id", "T"),
            ("Id", "C"),
            ("Id", "TC^2TC^2"),
            ("Id", "T^2C^2TC"),
            ("Id", "Id"),
        ],
        GroupKind::OctaFull => vec![
            ("TC^2,-T^2", "TC^2,-T^2"),
            ("TC^2,-T^2", "TC^2,T^2,-Id"),
            ("C,-T^2C^2T", "C,-T^2C^2T"),
            ("C,-T^2C^2T", "C,T^2C^2T,-Id"),
            // D2 with Fix (0,z,z); the second generator is -TC^2TC^2, since
            // T^3C^2 and -T^2C^2TC^2 generate a group of order 12.
            ("T^3C^2,-TC^2TC^2", "T^3C^2,-TC^2TC^2"),
            ("T^3C^2,-TC^2TC^2", "T^3C^2,TC^2TC^2,-Id"),
            ("-T^2C^2TC", "-T^2C^2TC"),
            ("-T^2C^2TC", "T^2C^2TC,-Id"),
            ("-T^2C^2TC", "-T^2C^2TC,TC^2TC^2"),
            ("-TC^2TC^2", "-TC^2TC^2"),
            ("-TC^2TC^2", "-Id,TC^2"),
            ("-TC^2TC^2", "-Id,TC^2TC^2"),
            ("-TC^2TC^2", "-TC^2TC^2,T^2"),
            ("-TC^2TC^2", "-TC^2TC^2,-T^2"),
            ("-TC^2TC^2", "-TC^2TC^2,T^2C^2TC"),
            ("-TC^2TC^2", "-TC^2TC^2,-T^2C^2TC"),
        ],
    }
}

fn catalog(group: &FiniteGroup) -> Vec<HopfBranchRecord> {
    hopf_catalog(group, &IsotropyConfig::default()).expect("catalog")
}

// ---------------------------------------------------------------- criteria

fn c1_group_engine() -> Outcome {
    let start = Instant::now();
    let orders: Vec<usize> = KINDS.iter().map(|k| k.build().order()).collect();
    let elapsed = start.elapsed();
    check(orders == [24, 24, 48], format!("orders {orders:?}"))?;
    let gens: Vec<usize> = [GroupElement::r(), GroupElement::c(), GroupElement::kappa(), GroupElement::t()]
        .iter()
        .map(element_order)
        .collect();
    check(gens == [2, 3, 2, 4], format!("generator orders {gens:?}"))?;
    check(elapsed < Duration::from_secs(1), format!("closure took {elapsed:?}"))?;
    Ok(format!("orders 24/24/48, R,C,κ,T of orders 2,3,2,4, {elapsed:.2?}"))
}

fn c2_identities() -> Outcome {
    let field = CyclotomicField::new(N);
    let eq = |a: TwistedElement, b: TwistedElement| a.matrix_exact(&field) == b.matrix_exact(&field);
    let t = |k, w| TwistedElement::new(word(w), k, N);
    check(eq(t(0, "T"), t(12, "C^2Rκ")), "T ≠ e^{iπ}C²Rκ")?;
    check(eq(t(0, "R"), t(0, "TC^2TC^2")), "R ≠ TC²TC²")?;
    check(eq(t(0, "κ"), t(12, "T^2C^2TC")), "κ ≠ e^{iπ}T²C²TC")?;
    let full: Vec<Vec<TwistedElement>> = KINDS.iter().map(|k| full_twisted_group(&k.build(), N)).collect();
    for i in 0..3 {
        for j in i + 1..3 {
            check(
                twisted_group_equal(&full[i], &full[j]),
                format!("{:?}×Z_24 ≠ {:?}×Z_24", KINDS[i], KINDS[j]),
            )?;
        }
    }
    let plain = |k: GroupKind| -> Vec<TwistedElement> {
        k.build().elements().iter().map(|g| TwistedElement::new(*g, 0, N)).collect()
    };
    check(
        !twisted_group_equal(&plain(GroupKind::TetraFull), &plain(GroupKind::OctaRot)),
        "⟨T,κ⟩ and O coincide without phases",
    )?;
    Ok("three identities exact; extended groups equal pairwise; unextended differ".into())
}

fn c3_isotropy() -> Outcome {
    let field = CyclotomicField::new(N);
    let mut worst = Duration::ZERO;
    let big = GroupKind::OctaFull.build();
    let mut per_group: Vec<Vec<(char, usize, FixSubspace)>> = Vec::new();
    for kind in KINDS {
        let group = kind.build();
        let start = Instant::now();
        let res = enumerate_isotropy(&group, &IsotropyConfig::default()).map_err(|e| e.to_string())?;
        worst = worst.max(start.elapsed());
        let dims: Vec<usize> = res.records.iter().map(|r| r.fix.real_dim).collect();
        check(res.records.len() == 9, format!("{kind:?}: {} classes", res.records.len()))?;
        check(dims == [0, 2, 2, 2, 2, 2, 4, 4, 6], format!("{kind:?}: dims {dims:?}"))?;
        let axial = res.records.iter().filter(|r| r.c_axial).count();
        check(axial == 5, format!("{kind:?}: {axial} C-axial"))?;
        for (row, gens) in isotropy_generators(kind) {
            let rec = res.records.iter().find(|r| r.row == row).ok_or(format!("{kind:?}: no row {row}"))?;
            let form = fix_form(&field, row).unwrap();
            let reference = reference_sigma(&group, &gens);
            check(
                fix_of_subgroup(&field, &group, &reference) == form,
                format!("{kind:?} ({row}): listed generators do not fix the listed subspace"),
            )?;
            let sigma = rec.sigma.as_ref().ok_or(format!("{kind:?} ({row}): missing Σ"))?;
            check(
                sigma.is_conjugate_to(&group, &reference),
                format!("{kind:?} ({row}): Σ not conjugate to the listed generators"),
            )?;
            check(
                group.elements().iter().any(|g| rec.fix.transform(&field, g) == form),
                format!("{kind:?} ({row}): Fix {} not conjugate to the listed form", rec.fix.pattern()),
            )?;
        }
        per_group.push(res.records.iter().map(|r| (r.row, r.fix.real_dim, r.fix.clone())).collect());
    }
    for other in &per_group[1..] {
        for ((ra, da, fa), (rb, db, fb)) in per_group[0].iter().zip(other) {
            let same = ra == rb && da == db && big.elements().iter().any(|g| fa.transform(&field, g) == *fb);
            check(same, format!("row ({ra}) differs across selectors"))?;
        }
    }
    check(worst < Duration::from_secs(30), format!("enumeration took {worst:?}"))?;
    Ok(format!(
        "9 classes, dims (0,2,2,2,2,2,4,4,6), 5 C-axial, forms and generators up to conjugacy, slowest {worst:.2?}"
    ))
}

fn match_pairs(kind: GroupKind) -> Result<(usize, Vec<String>), String> {
    let group = kind.build();
    let pe = enumerate_pairs(&group, N);
    let found: Vec<(Subgroup, Subgroup)> = pe
        .pairs
        .iter()
        .filter(|p| !group.contains_minus_id() || p.k.order() > 1)
        .map(|p| (p.h.clone(), p.k.clone()))
        .collect();
    let listed: Vec<(Subgroup, Subgroup)> = pair_table(kind)
        .iter()
        .map(|(k, h)| (subgroup(&group, h), subgroup(&group, k)))
        .collect();
    let mut problems = Vec::new();
    for (i, (h, k)) in listed.iter().enumerate() {
        let (kw, hw) = pair_table(kind)[i];
        if !found.iter().any(|(fh, fk)| pairs_conjugate(&group, (h, k), (fh, fk))) {
            problems.push(format!("listed K={{{kw}}} H={{{hw}}} is not admissible"));
        }
        for (j, (h2, k2)) in listed.iter().enumerate().skip(i + 1) {
            if pairs_conjugate(&group, (h, k), (h2, k2)) {
                let (kw2, hw2) = pair_table(kind)[j];
                problems.push(format!(
                    "listed K={{{kw}}} H={{{hw}}} and K={{{kw2}}} H={{{hw2}}} are conjugate"
                ));
            }
        }
    }
    for (h, k) in &found {
        if !listed.iter().any(|(lh, lk)| pairs_conjugate(&group, (h, k), (lh, lk))) {
            let words = |s: &Subgroup| {
                let w: Vec<String> = group.generators_of(s).into_iter().map(|i| group.word_string(i)).collect();
                w.join(",")
            };
            problems.push(format!(
                "admissible K={} {{{}}} H={} {{{}}} is not listed",
                k.structure_name(&group),
                words(k),
                h.structure_name(&group),
                words(h)
            ));
        }
    }
    Ok((found.len(), problems))
}

fn c4_pairs() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (kind, want) in [(GroupKind::TetraFull, 10), (GroupKind::OctaRot, 11), (GroupKind::OctaFull, 16)] {
        let (count, problems) = match_pairs(kind)?;
        notes.push(format!("{}: {count}", kind.selector()));
        if count != want {
            failures.push(format!("{}: {count} pairs, expected {want}", kind.selector()));
        }
        failures.extend(problems.into_iter().map(|p| format!("{}: {p}", kind.selector())));
    }
    let g = GroupKind::OctaFull.build();
    let n8 = normalizer(&g, &subgroup(&g, "-T^2C^2TC")).order();
    let n16 = normalizer(&g, &subgroup(&g, "-TC^2TC^2")).order();
    if (n8, n16) != (8, 16) {
        failures.push(format!("normalizer orders {n8}, {n16}"));
    }
    if failures.is_empty() {
        Ok(format!("{}; normalizers 8 and 16", notes.join(", ")))
    } else {
        Err(failures.join("; "))
    }
}

fn unrealized_matches(kind: GroupKind, listed: &[(&str, &str)]) -> Result<(), String> {
    let group = kind.build();
    let pe = enumerate_pairs(&group, N);
    let cat = catalog(&group);
    let got = classify_unrealizable(&group, &pe, &cat, Reading::Full);
    let want: Vec<(Subgroup, Subgroup)> = listed.iter().map(|(h, k)| (subgroup(&group, h), subgroup(&group, k))).collect();
    check(got.len() == want.len(), format!("{}: {} exceptions, expected {}", kind.selector(), got.len(), want.len()))?;
    for (h, k) in &want {
        check(
            got.iter().any(|p| pairs_conjugate(&group, (&p.h, &p.k), (h, k))),
            format!("{}: listed exception not found", kind.selector()),
        )?;
    }
    Ok(())
}

fn c5_primary_hopf() -> Outcome {
    let mut failures = Vec::new();
    if let Err(e) = unrealized_matches(GroupKind::TetraFull, &[("R,κ", "R,κ"), ("κ", "Id")]) {
        failures.push(e);
    }
    if let Err(e) = unrealized_matches(GroupKind::OctaRot, &[("TC^2", "TC^2"), ("C", "C"), ("T^3C^2", "T^3C^2")]) {
        failures.push(e);
    }
    let g = GroupKind::OctaFull.build();
    let pe = enumerate_pairs(&g, N);
    let cat = catalog(&g);
    let full = classify_unrealizable(&g, &pe, &cat, Reading::Full).len();
    let reduced = classify_unrealizable(&g, &pe, &cat, Reading::Reduced).len();
    if full != 11 && reduced != 11 {
        failures.push(format!(
            "octa-full: {full} unrealized pairs with K ≠ 1 (full reading), {reduced} (reduced reading), expected 11"
        ));
    }
    let mut rows = 0;
    for kind in KINDS {
        let group = kind.build();
        let cat = catalog(&group);
        for (row, h, k, count) in hopf_table(kind) {
            rows += 1;
            let Some(rec) = cat.iter().find(|r| r.row == row) else {
                failures.push(format!("{} ({row}) missing", kind.selector()));
                continue;
            };
            let (rh, rk) = rec.pair(Reading::Reduced);
            let (wh, wk) = (subgroup(&group, h), subgroup(&group, k));
            if !pairs_conjugate(&group, (rh, rk), (&wh, &wk)) {
                failures.push(format!("{} ({row}): (H,K) differs", kind.selector()));
            }
            if rec.branch_count != count {
                failures.push(format!(
                    "{} ({row}): {} branches, expected {count} (|Γ|/|H| with reduced H = {})",
                    kind.selector(),
                    rec.branch_count,
                    group.order() / rh.order()
                ));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("exceptions 2/3/11, {rows} rows of (H,K) and branch counts"))
    } else {
        Err(failures.join("; "))
    }
}

fn submaximal(sols: &[BranchSolution]) -> Vec<&BranchSolution> {
    sols.iter().filter(|s| s.classification == Classification::Submaximal).collect()
}

fn c6_branch_solver() -> Outcome {
    let one = cx(1.0, 0.0);
    let golden = [
        (cx(-1.0, 1.25), Some(2)),
        (cx(-1.0, 4.0), None),
        (cx(0.75, 0.0), Some(1)),
        (cx(1.25, 0.0), Some(0)),
        (cx(0.2, 0.25), Some(1)),
        (cx(1.25, 0.25), Some(0)),
        (cx(-0.25, 1.25), Some(2)),
        (cx(-0.75, 1.25), Some(3)),
        (cx(-1.25, 1.25), Some(1)),
    ];
    for (rho, want) in golden {
        let sols = solve_zz_x(rho, one).map_err(|e| e.to_string())?;
        match want {
            Some(n) => check(count_submaximal(&sols) == n, format!("{rho}: {} submaximal, expected {n}", count_submaximal(&sols)))?,
            None => check(
                sols.iter().any(|s| s.classification == Classification::Tangency),
                format!("{rho}: no tangency reported"),
            )?,
        }
        for s in &sols {
            if s.r_squared.is_finite() {
                let r = zz_x_residual(rho, one, s.r_squared, s.angle);
                check(r < 1e-9, format!("{rho}: residual {r:e}"))?;
            }
        }
    }
    let at = solve_zz_x(cx(0.75, 0.0), one).unwrap();
    let s = submaximal(&at)[0];
    check(
        (s.circle_point.0 + 1.0).abs() < 1e-9 && s.circle_point.1.abs() < 1e-9,
        "ratio 3/4: submaximal point is not (−1, 0)",
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let rho = cx(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let sols = classify_intersections(rho, one).unwrap();
        let root = sols
            .iter()
            .find(|s| (s.circle_point.0 - 1.0).abs() < 1e-9 && s.circle_point.1.abs() < 1e-9)
            .ok_or(format!("{rho}: (1,0) missing"))?;
        check(root.r_squared == 1.0, format!("{rho}: r² = {} at (1,0)", root.r_squared))?;
        let curve = curve_coefficients(rho);
        let closed = ((rho.re + 1.0).powi(2) + rho.im.powi(2)) / 2.0;
        check((curve.r(1.0, 0.0) - closed).abs() < 1e-12, format!("{rho}: R(1,0) mismatch"))?;
        check(!intersect_circle(&curve).is_empty(), "no intersections")?;
    }
    Ok("nine golden ratios, residuals < 1e-9, (1,0) with r = 1 for 500 ratios, R(1,0) closed form".into())
}

fn c7_region_and_stabilizer() -> Outcome {
    let one = cx(1.0, 0.0);
    let band = 1e-6;
    let mut checked = 0;
    for i in 0..200 {
        for j in 0..200 {
            let rho = cx(-2.5 + 5.0 * (i as f64 + 0.5) / 200.0, -2.5 + 5.0 * (j as f64 + 0.5) / 200.0);
            if (rho.norm() - 1.0).abs() < band || (rho.re.abs() - 1.0).abs() < band {
                continue;
            }
            let exists = !submaximal(&solve_z1z2(rho, one).unwrap()).is_empty();
            let region = rho.norm() > 1.0 && rho.re.abs() < 1.0;
            check(exists == region, format!("{rho}: existence {exists}, region {region}"))?;
            checked += 1;
        }
    }
    let field = CyclotomicField::new(N);
    let e1: CycloVector = vec![field.one(), field.zero(), field.zero()];
    let e2: CycloVector = vec![field.zero(), field.one(), field.zero()];
    let mut points = 0;
    for kind in KINDS {
        let group = kind.build();
        let plane: BTreeSet<TwistedElement> = full_twisted_group(&group, N)
            .into_iter()
            .filter(|t| t.act_exact(&field, &e1) == e1 && t.act_exact(&field, &e2) == e2)
            .collect();
        for rho in [cx(0.0, 2.0), cx(0.3, -1.7), cx(-0.6, 1.1), cx(0.9, 3.0)] {
            for s in submaximal(&solve_z1z2(rho, one).unwrap()) {
                if (s.r_squared - 1.0).abs() < 1e-6 || s.r_squared < 1e-6 {
                    continue;
                }
                let z: C3 = [s.xi, one, cx(0.0, 0.0)];
                let stab: BTreeSet<TwistedElement> = full_twisted_group(&group, N)
                    .into_iter()
                    .filter(|t| {
                        let w = t.act_numeric(&z);
                        (0..3).map(|i| (w[i] - z[i]).norm_sqr()).sum::<f64>().sqrt() < 1e-9
                    })
                    .collect();
                check(
                    stab == plane,
                    format!("{}: stabilizer of (ξ,1,0) at ratio {rho} has {} elements, plane {}", kind.selector(), stab.len(), plane.len()),
                )?;
                let r = z1z2_residual(rho, one, s.r_squared, s.angle);
                check(r < 1e-9, format!("{rho}: residual {r:e}"))?;
                points += 1;
            }
        }
    }
    Ok(format!(
        "{checked} grid ratios agree with {{|α/β|>1, |Re α/β|<1}}; {points} submaximal points fixed exactly by the plane's pointwise stabilizer"
    ))
}

fn c8_equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rand_c = |r: &mut ChaCha8Rng| cx(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
    let p = NFParams {
        lambda: rand_c(&mut rng),
        alpha: rand_c(&mut rng),
        beta: rand_c(&mut rng),
        gamma: rand_c(&mut rng),
    };
    let mut worst: f64 = 0.0;
    for kind in KINDS {
        let group = kind.build();
        let mut gens: Vec<TwistedElement> = group
            .generators()
            .iter()
            .map(|(_, g)| TwistedElement::new(*g, 0, N))
            .collect();
        gens.push(TwistedElement::new(GroupElement::identity(), 1, N));
        for t in &gens {
            for _ in 0..50 {
                let z: C3 = std::array::from_fn(|_| rand_c(&mut rng));
                let lhs = eval_vf(&t.act_numeric(&z), &p);
                let rhs = t.act_numeric(&eval_vf(&z, &p));
                let r = (0..3).map(|i| (lhs[i] - rhs[i]).norm_sqr()).sum::<f64>().sqrt();
                worst = worst.max(r);
            }
        }
        for _ in 0..50 {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let e = Complex64::from_polar(1.0, theta);
            let z: C3 = std::array::from_fn(|_| rand_c(&mut rng));
            let ez: C3 = std::array::from_fn(|i| e * z[i]);
            let (lhs, fz) = (eval_vf(&ez, &p), eval_vf(&z, &p));
            let r = (0..3).map(|i| (lhs[i] - e * fz[i]).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(r);
        }
        let res = enumerate_isotropy(&group, &IsotropyConfig::default()).map_err(|e| e.to_string())?;
        for rec in res.records.iter().filter(|r| r.fix.complex_dim > 0) {
            restrict(&rec.fix, &p).map_err(|e| format!("{} ({}): {e}", kind.selector(), rec.row))?;
        }
    }
    check(worst < 1e-12, format!("equivariance residual {worst:e}"))?;
    let j = jacobian_origin(&p);
    for (i, row) in j.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let want = if i == k { p.lambda } else { cx(0.0, 0.0) };
            check(*v == want, "jacobian_origin differs from λ·Id")?;
        }
    }
    let eps = 1e-7;
    for k in 0..3 {
        let mut z = [cx(0.0, 0.0); 3];
        z[k] = cx(eps, 0.0);
        let f = eval_vf(&z, &p);
        let col: Vec<Complex64> = f.iter().map(|v| v / eps).collect();
        for (i, v) in col.iter().enumerate() {
            check((*v - j[i][k]).norm() < 1e-9, "difference quotient disagrees with the Jacobian")?;
        }
    }
    Ok(format!("equivariance residual {worst:.1e}; all Fix subspaces flow-invariant; Jacobian λ·Id"))
}

fn c9_ode(suite_start: Instant) -> Outcome {
    let config = VerifyConfig {
        transient: 0.0,
        ..VerifyConfig::default()
    };
    let (alpha, beta) = (cx(0.0, 2.0), cx(1.0, 0.0));
    let mut gamma = None;
    let mut worst_closure: f64 = 0.0;
    let mut failures = Vec::new();
    for kind in KINDS {
        let group = kind.build();
        let cat = catalog(&group);
        for row in 'b'..='f' {
            let run = verify_row(kind, row, alpha, beta, N, DEFAULT_SYMMETRY_TOL, &config)
                .map_err(|e| format!("{} ({row}): {e}", kind.selector()))?;
            gamma.get_or_insert(run.params.gamma);
            worst_closure = worst_closure.max(run.orbit.closure_error);
            if run.orbit.closure_error >= 1e-6 {
                failures.push(format!("{} ({row}): closure {:e}", kind.selector(), run.orbit.closure_error));
            }
            let rec = cat.iter().find(|r| r.row == row).unwrap();
            let det = &run.detected;
            if det.sigma.matrix_set(&group) != rec.sigma.matrix_set(&group) {
                failures.push(format!("{} ({row}): detected Σ differs from the catalog", kind.selector()));
            }
            if (&det.h, &det.k) != rec.pair(Reading::Full) {
                failures.push(format!("{} ({row}): full (H,K) differs", kind.selector()));
            }
            let (rh, rk) = det.reduced(&group);
            if (&rh, &rk) != rec.pair(Reading::Reduced) {
                failures.push(format!("{} ({row}): reduced (H,K) differs", kind.selector()));
            }
            for interp in &det.interpretations {
                let target = interp.group.build();
                let (_, h, k, _) = hopf_table(interp.group).into_iter().find(|e| e.0 == row).unwrap();
                let got_h = subgroup(&target, &interp.h.join(","));
                let got_k = subgroup(&target, &interp.k.join(","));
                let (wh, wk) = (subgroup(&target, h), subgroup(&target, k));
                if !pairs_conjugate(&target, (&got_h, &got_k), (&wh, &wk)) {
                    failures.push(format!(
                        "{} ({row}) read in {}: H={{{}}} K={{{}}}, expected H={{{h}}} K={{{k}}}",
                        kind.selector(),
                        interp.group.selector(),
                        interp.h.join(","),
                        interp.k.join(",")
                    ));
                }
            }
        }
    }
    let elapsed = suite_start.elapsed();
    if elapsed >= Duration::from_secs(300) {
        failures.push(format!("suite took {elapsed:?}"));
    }
    if failures.is_empty() {
        let g = gamma.unwrap();
        Ok(format!(
            "λ=1+i, α=2i, β=1, scanned γ={}{:+}i; 15 orbits, worst closure {worst_closure:.1e}; (H,K) match in all three alphabets; suite {elapsed:.1?}",
            g.re, g.im
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn main() {
    let suite_start = Instant::now();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 group engine", Box::new(c1_group_engine)),
        ("2 phase identities", Box::new(c2_identities)),
        ("3 isotropy table", Box::new(c3_isotropy)),
        ("4 H mod K pairs", Box::new(c4_pairs)),
        ("5 primary Hopf classification", Box::new(c5_primary_hopf)),
        ("6 branch solver", Box::new(c6_branch_solver)),
        ("7 existence region and stabilizer", Box::new(c7_region_and_stabilizer)),
        ("8 equivariance", Box::new(c8_equivariance)),
        ("9 ODE verification", Box::new(move || c9_ode(suite_start))),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())))));
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed, {:.1?}",
        criteria.len() - failed,
        suite_start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
