//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::Command;
use std::time::{Duration, Instant};

use dirac_pairings::elliptic::verify_dirac_equals_elliptic;
use dirac_pairings::exec::Execution;
use dirac_pairings::fredholm::perturbed_index;
use dirac_pairings::fredholm::suite::{run_suite, SuiteKind};
use dirac_pairings::lab::{
    build_spinor_matrices, dirac_cohomology, index_st, lab_conjecture, lab_identities, lab_modules,
    lab_perturbation_instances, verify_dsquared_scalar, LabAlgebra,
};
use dirac_pairings::linalg::Q;
use dirac_pairings::spin::{
    dirac_index_finite_dim, dirac_index_limits, dirac_pairing, ep_pairing_finite_dim, wedge_p_alternating,
    HCParameter, ParamKind,
};
use dirac_pairings::weights::{expand, LaurentElement, RootDatum, Weight, WeylKind, PRESETS};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn datum(name: &str) -> RootDatum {
    RootDatum::preset(name).expect("preset")
}

/// Π_{β noncompact} (1 − e^β), summed over one root of each ± pair.
fn product_formula(d: &RootDatum) -> LaurentElement {
    let one = LaurentElement::monomial(Weight::zero(d.rank()), 1);
    let mut out = one.clone();
    for (i, r) in d.roots().iter().enumerate() {
        if !d.is_compact(i) {
            out = &out * &(&one - &LaurentElement::monomial(r.clone(), 1));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for name in PRESETS {
        let d = datum(name);
        let v = wedge_p_alternating(&d).map_err(|e| format!("{name}: {e}"))?;
        let chars = expand(&d, &v).map_err(|e| format!("{name}: {e}"))?;
        ensure(chars == product_formula(&d), || format!("{name}: character differs from Π(1 − e^β)"))?;
    }
    within(start, Duration::from_secs(1))
}

fn sl2_params() -> Vec<HCParameter> {
    (1..=5)
        .flat_map(|n| {
            [
                HCParameter { chi: Weight::from([n]), chamber: 0, kind: ParamKind::DiscreteSeries },
                HCParameter { chi: Weight::from([-n]), chamber: 1, kind: ParamKind::DiscreteSeries },
            ]
        })
        .collect()
}

/// w·χ in chamber w·b₁ for every w in W.
fn su21_params(d: &RootDatum) -> Vec<HCParameter> {
    let chi = &d.reference_rho().rho + &Weight::from([2, 2]);
    d.weyl_group(WeylKind::Full)
        .iter()
        .map(|w| {
            let c = w.apply(&chi);
            HCParameter { chamber: d.chamber_containing(&c).expect("regular"), chi: c, kind: ParamKind::DiscreteSeries }
        })
        .collect()
}

/// The W_k-conjugate of χ dominant for the reference compact roots, and its chamber sign.
fn expected_index(d: &RootDatum, p: &HCParameter) -> (Weight, i64) {
    let rk: Vec<&Weight> = d.compact_positive(0);
    for s in d.weyl_group(WeylKind::Compact) {
        let c = s.apply(&p.chi);
        if rk.iter().all(|b| d.dot(&c, b) > 0) {
            let chamber = d.chamber_containing(&c).expect("regular");
            return (&c - &d.reference_rho().rho_c, i64::from(d.chamber(chamber).expect("chamber").sign));
        }
    }
    panic!("no compact-dominant conjugate of {:?}", p.chi);
}

fn same_module(d: &RootDatum, a: &HCParameter, b: &HCParameter) -> bool {
    d.weyl_group(WeylKind::Compact).iter().any(|s| s.apply(&a.chi) == b.chi)
}

fn criterion_2() -> Outcome {
    for (name, params) in [("sl2R", sl2_params()), ("su21", su21_params(&datum("su21")))] {
        let d = datum(name);
        let idx: Vec<_> = params
            .iter()
            .map(|p| dirac_index_limits(&d, p).map_err(|e| format!("{name} {:?}: {e}", p.chi)))
            .collect::<Result<_, _>>()?;
        for (p, i) in params.iter().zip(&idx) {
            let (hw, sign) = expected_index(&d, p);
            ensure(i.index.len() == 1 && i.index.coeff(&hw) == sign, || {
                format!("{name} {:?}: index {:?}, expected {sign}·F{:?}", p.chi, i.index.terms(), hw.coords())
            })?;
        }
        for (a, pa) in params.iter().enumerate() {
            for (b, pb) in params.iter().enumerate() {
                let g = dirac_pairing(&idx[a], &idx[b]).map_err(|e| e.to_string())?.value;
                let want = i64::from(same_module(&d, pa, pb));
                ensure(g == want, || format!("{name}: Gram[{a}][{b}] = {g}, expected {want}"))?;
            }
        }
    }
    Ok("sl2R 10 parameters, su21 6 chambers".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    for (name, params) in [("sl2R", sl2_params()), ("su21", su21_params(&datum("su21")))] {
        let d = datum(name);
        let r = verify_dirac_equals_elliptic(&d, &params, Execution::Parallel).map_err(|e| e.to_string())?;
        ensure(r.equal, || format!("{name}: mismatches at {:?}", r.mismatches))?;
        for i in 0..params.len() {
            ensure(r.gram_elliptic[(i, i)] == Q::from_integer(1.into()), || format!("{name}: self-pairing {i} ≠ 1"))?;
            for j in 0..params.len() {
                ensure(r.gram_elliptic[(i, j)].is_integer(), || format!("{name}: non-integer entry ({i}, {j})"))?;
            }
        }
    }
    within(start, Duration::from_secs(1))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let d = datum("sl2R");
    let table = lab_conjecture("sl2R", 6, Execution::Parallel).map_err(|e| e.to_string())?;
    ensure(table.rows.len() == 49, || format!("{} rows", table.rows.len()))?;
    for row in &table.rows {
        let n: i64 = row.x[1..].parse().expect("F<n>");
        let m: i64 = row.y[1..].parse().expect("F<n>");
        let ep = ep_pairing_finite_dim(&d, &Weight::from([n]), &Weight::from([m])).map_err(|e| e.to_string())?;
        let want = if n == m { 2 } else { 0 };
        let got = [ep, row.ep_pairing, row.euler, row.index_d, row.index_dirac_part, row.dirac_pairing];
        ensure(got.iter().all(|&v| v == want) && row.chain_dims_match, || {
            format!("F{n}, F{m}: ep/euler/ind d/ind 𝒟/dirac = {got:?}, expected {want}")
        })?;
    }
    within(start, Duration::from_secs(30))
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for (group, max) in [("sl2R", 6), ("su21", 0)] {
        let r = lab_identities(group, max, Execution::Parallel).map_err(|e| e.to_string())?;
        if let Some(bad) = r.modules.iter().find(|m| !m.ok()) {
            return Err(format!("{group} {}: {:?}", bad.module, bad.error));
        }
        // Isotypic scalars against −‖Λ‖² + ‖τ+ρ_c‖² in the root-datum form.
        let alg = LabAlgebra::preset(group).map_err(|e| e.to_string())?;
        let sp = build_spinor_matrices(&alg).map_err(|e| e.to_string())?;
        let d = datum(group);
        for (name, x) in lab_modules(&alg, max).map_err(|e| e.to_string())? {
            for s in verify_dsquared_scalar(&alg, &x, &sp).map_err(|e| e.to_string())? {
                let want = d.norm2(&(&s.k_type + &d.reference_rho().rho_c)) - d.norm2(&x.infinitesimal_character);
                ensure(s.scalar == want, || format!("{group} {name} τ={:?}: {} vs {want}", s.k_type.coords(), s.scalar))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} isotypic components"))
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for (group, max) in [("sl2R", 6), ("su21", 0)] {
        let r = lab_identities(group, max, Execution::Parallel).map_err(|e| e.to_string())?;
        if let Some(bad) = r.pairs.iter().find(|p| !p.ok()) {
            return Err(format!("{group} {} -> {}: {:?}", bad.x, bad.y, bad.error));
        }
        count += r.pairs.len();
    }
    // ind(S, T) against the pairing of character-level Dirac indices.
    let alg = LabAlgebra::preset("sl2R").map_err(|e| e.to_string())?;
    let sp = build_spinor_matrices(&alg).map_err(|e| e.to_string())?;
    let d = datum("sl2R");
    let mods = lab_modules(&alg, 6).map_err(|e| e.to_string())?;
    for (n, (_, x)) in mods.iter().enumerate() {
        let ix = dirac_index_finite_dim(&d, &Weight::from([n as i64])).map_err(|e| e.to_string())?;
        let hx = dirac_cohomology(&alg, x, &sp).map_err(|e| e.to_string())?;
        ensure(hx.index == ix, || format!("F{n}: explicit Dirac cohomology index differs"))?;
        for (m, (_, y)) in mods.iter().enumerate() {
            let iy = dirac_index_finite_dim(&d, &Weight::from([m as i64])).map_err(|e| e.to_string())?;
            let want = dirac_pairing(&ix, &iy).map_err(|e| e.to_string())?.value;
            let got = index_st(&alg, x, y, &sp).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("F{n}, F{m}: ind(S,T) = {got}, pairing {want}"))?;
        }
    }
    Ok(format!("{count} module pairs"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut exports = lab_perturbation_instances("sl2R", 6).map_err(|e| e.to_string())?;
    exports.extend(lab_perturbation_instances("su21", 0).map_err(|e| e.to_string())?);
    for e in &exports {
        let r = perturbed_index(e.space, &e.d, &e.del).map_err(|err| format!("{}: {err}", e.label))?;
        ensure(r.holds, || format!("{}: {r:?}", e.label))?;
    }
    let mut summary = Vec::new();
    for s in SuiteKind::ALL {
        let total = s.default_instances();
        let (count, extra) =
            if s == SuiteKind::Perturbation { (total - exports.len() as u32, &exports[..]) } else { (total, &exports[..0]) };
        let r = run_suite(s, 2024, count, extra, Execution::Parallel);
        ensure(r.ok() && r.instances == total, || format!("{}: {:?}", s.name(), r.failures.first()))?;
        summary.push(format!("{} {}/{}", s.name(), r.passed, r.instances));
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{}; {t}", summary.join(", ")))
}

fn run_cli(args: &[&str], threads: Option<&str>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dirac-pairings"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("DIRAC_PAIRINGS_THREADS", t),
        None => cmd.env_remove("DIRAC_PAIRINGS_THREADS"),
    };
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?} exited with {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn criterion_8() -> Outcome {
    let configs: [&[&str]; 6] = [
        &["root-data", "show", "--group", "su21"],
        &["pair", "dirac", "--group", "sl2R", "--ds", "1..3"],
        &["pair", "ep", "--group", "sl2R", "--findim", "0..4", "--format", "csv"],
        &["pair", "elliptic", "--group", "su21", "--ds", "1..2"],
        &["fredholm", "check", "--suite", "all", "--seed", "7"],
        &["lab", "conjecture", "--group", "sl2R", "--max", "6"],
    ];
    for args in configs {
        let a = run_cli(args, None)?;
        let b = run_cli(args, None)?;
        let c = run_cli(args, Some("1"))?;
        ensure(a == b && a == c, || format!("{args:?} output differs between runs"))?;
    }
    Ok(format!("{} configurations, repeated and single-threaded", configs.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("alternating wedge of p equals spinor square", criterion_1),
        ("discrete-series Dirac indices and Gram matrices", criterion_2),
        ("Dirac Gram equals elliptic Gram", criterion_3),
        ("five routes to the Euler-Poincaré pairing for F_n, F_m", criterion_4),
        ("Parthasarathy and isotypic D² scalars", criterion_5),
        ("S/T, split-operator and index identities", criterion_6),
        ("Fredholm suites", criterion_7),
        ("byte-identical CLI output", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(info) => println!("criterion {} PASS: {name} ({info})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
