use std::path::Path;

use dirac_pairings::elliptic::verify_dirac_equals_elliptic;
use dirac_pairings::exec::Execution;
use dirac_pairings::fredholm::suite::{run_suite, PerturbationInstance, SuiteKind};
use dirac_pairings::lab::{
    lab_conjecture_for, lab_identities_for, lab_modules, lab_perturbation_instances, LabAlgebra, MatrixHCModule,
};
use dirac_pairings::linalg::format_q;
use dirac_pairings::spin::{
    dirac_index_finite_dim, dirac_index_limits, dirac_pairing, ep_pairing_finite_dim, norm_matches, spinor_modules,
    wedge_p_alternating, DiracIndex, HCParameter, ParamKind,
};
use dirac_pairings::weights::{RootDatum, VirtualCharacter, Weight, WeylKind};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{parse_suites, GroupArgs, LabAction, PairKind, ParamArgs};
use crate::error::{CliError, Context};
use crate::report::{Check, Report, Table};

pub fn load_datum(g: &GroupArgs) -> Result<RootDatum, CliError> {
    match (&g.group, &g.datum) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::DatumLoad { path: path.display().to_string(), reason: e.to_string() })?;
            RootDatum::from_json(&text)
                .map_err(|e| CliError::DatumLoad { path: path.display().to_string(), reason: e.to_string() })
        }
        (Some(name), None) => RootDatum::preset(name).map_err(|e| CliError::Usage(e.to_string())),
        (None, None) => RootDatum::preset("sl2R").map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn group_echo(g: &GroupArgs, datum: &RootDatum) -> Value {
    match &g.datum {
        Some(p) => json!({ "datum_file": p.display().to_string(), "datum": datum.name() }),
        None => json!({ "group": datum.name() }),
    }
}

pub fn fmt_weight(w: &Weight) -> String {
    let c: Vec<String> = w.coords().iter().map(ToString::to_string).collect();
    format!("({})", c.join(","))
}

pub fn fmt_virtual(v: &VirtualCharacter) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (w, c) in v.terms() {
        let sign = if *c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = c.unsigned_abs();
        let coeff = if mag == 1 { String::new() } else { mag.to_string() };
        out.push_str(&format!("{sign}{coeff}F{}", fmt_weight(w)));
    }
    out
}

/// A labelled parameter: discrete series (χ, b) or a finite-dimensional highest weight.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Param {
    DiscreteSeries { label: String, parameter: HCParameter },
    FiniteDimensional { label: String, highest_weight: Weight },
}

impl Param {
    fn label(&self) -> &str {
        match self {
            Param::DiscreteSeries { label, .. } | Param::FiniteDimensional { label, .. } => label,
        }
    }

    fn index(&self, datum: &RootDatum) -> dirac_pairings::Result<DiracIndex> {
        match self {
            Param::DiscreteSeries { parameter, .. } => dirac_index_limits(datum, parameter),
            Param::FiniteDimensional { highest_weight, .. } => dirac_index_finite_dim(datum, highest_weight),
        }
    }

    /// Λ with ‖τ + ρ_c‖² = ‖Λ‖² for every term τ of the index.
    fn infinitesimal_character(&self, datum: &RootDatum) -> Weight {
        match self {
            Param::DiscreteSeries { parameter, .. } => parameter.chi.clone(),
            Param::FiniteDimensional { highest_weight, .. } => highest_weight + &datum.reference_rho().rho,
        }
    }
}

/// χ = n·ρ over every chamber whose compact positive system is the reference one.
pub fn ds_family(datum: &RootDatum, range: &std::ops::RangeInclusive<i64>) -> Result<Vec<Param>, CliError> {
    let mut out = Vec::new();
    for n in range.clone() {
        if n <= 0 {
            return Err(CliError::Usage(format!("--ds needs n ≥ 1, got {n}")));
        }
        let chi0 = datum.reference_rho().rho.scaled(n);
        let mut found: Vec<HCParameter> = Vec::new();
        for w in datum.weyl_group(WeylKind::Full) {
            let chi = w.apply(&chi0);
            let Some(chamber) = datum.chamber_containing(&chi) else { continue };
            let p = HCParameter { chi, chamber, kind: ParamKind::DiscreteSeries };
            if p.normalized(datum) == p && !found.contains(&p) {
                p.validate(datum).map_err(|e| CliError::Usage(format!("--ds {n}: {e}")))?;
                found.push(p);
            }
        }
        found.sort_by_key(|p| p.chamber);
        out.extend(found.into_iter().map(|p| Param::DiscreteSeries {
            label: format!("DS{}@b{}", fmt_weight(&p.chi), p.chamber),
            parameter: p,
        }));
    }
    Ok(out)
}

pub fn findim_family(datum: &RootDatum, range: &std::ops::RangeInclusive<i64>) -> Result<Vec<Param>, CliError> {
    range
        .clone()
        .map(|n| {
            if n < 0 {
                return Err(CliError::Usage(format!("--findim needs n ≥ 0, got {n}")));
            }
            let hw = datum.reference_rho().rho.scaled(n);
            Ok(Param::FiniteDimensional { label: format!("F{}", fmt_weight(&hw)), highest_weight: hw })
        })
        .collect()
}

fn params(datum: &RootDatum, p: &ParamArgs) -> Result<Vec<Param>, CliError> {
    let mut out = Vec::new();
    if let Some(r) = &p.ds {
        out.extend(ds_family(datum, r)?);
    }
    if let Some(r) = &p.findim {
        out.extend(findim_family(datum, r)?);
    }
    Ok(out)
}

fn range_echo(r: &Option<std::ops::RangeInclusive<i64>>) -> Value {
    r.as_ref().map_or(Value::Null, |r| json!([r.start(), r.end()]))
}

pub fn root_data_show(g: &GroupArgs) -> Result<Report, CliError> {
    let datum = load_datum(g)?;
    let mut report = Report::new("root-data show", group_echo(g, &datum));
    let spin = spinor_modules(&datum, 0).context("spinor modules")?;
    let chambers: Vec<Value> = (0..datum.chambers().len())
        .map(|i| {
            let c = &datum.chambers()[i];
            let rho = datum.rho_vectors(i).expect("chamber exists");
            json!({ "index": i, "positive": c.positive, "sign": c.sign, "rho": rho.rho, "rho_c": rho.rho_c, "rho_n": rho.rho_n })
        })
        .collect();
    let roots: Vec<Value> = datum
        .roots()
        .iter()
        .enumerate()
        .map(|(i, r)| json!({ "weight": r, "compact": datum.is_compact(i) }))
        .collect();
    report.results = json!({
        "name": datum.name(),
        "rank": datum.rank(),
        "gram": datum.gram(),
        "form_denominator": datum.form_denominator(),
        "k_lattice_step": datum.k_lattice_step(),
        "dim_p": datum.dim_p(),
        "weyl_order": datum.weyl_group(WeylKind::Full).len(),
        "compact_weyl_order": datum.weyl_group(WeylKind::Compact).len(),
        "roots": roots,
        "chambers": chambers,
        "spinor_plus": spin.s_plus,
        "spinor_minus": spin.s_minus,
    });
    let mut t = Table::new(["chamber", "sign", "rho", "rho_c", "rho_n"]);
    for i in 0..datum.chambers().len() {
        let rho = datum.rho_vectors(i).expect("chamber exists");
        t.push([
            i.to_string(),
            datum.chambers()[i].sign.to_string(),
            fmt_weight(&rho.rho),
            fmt_weight(&rho.rho_c),
            fmt_weight(&rho.rho_n),
        ]);
    }
    report.table = t;
    report.checks.push(match wedge_p_alternating(&datum) {
        Ok(_) => Check::new("alternating wedge of p equals spinor square", true),
        Err(e) => Check::new("alternating wedge of p equals spinor square", false).with_detail(e.to_string()),
    });
    Ok(report)
}

pub struct DiracIndexArgs<'a> {
    pub group: &'a GroupArgs,
    pub params: &'a ParamArgs,
    pub chi: Option<&'a str>,
    pub chamber: Option<usize>,
    pub limit: bool,
}

fn parse_weight(s: &str) -> Result<Weight, CliError> {
    let coords = s
        .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| CliError::Usage(format!("--chi {s}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Weight::from(coords))
}

pub fn dirac_index(a: DiracIndexArgs) -> Result<Report, CliError> {
    let datum = load_datum(a.group)?;
    let mut list = params(&datum, a.params)?;
    if let Some(chi) = a.chi {
        let chi = parse_weight(chi)?;
        if chi.rank() != datum.rank() {
            return Err(CliError::Usage(format!("--chi needs {} coordinates", datum.rank())));
        }
        let chamber = match a.chamber {
            Some(c) => c,
            None => datum
                .chamber_containing(&chi)
                .ok_or_else(|| CliError::Usage("χ is singular; pass --chamber".into()))?,
        };
        let kind = if a.limit { ParamKind::Limit } else { ParamKind::DiscreteSeries };
        let parameter = HCParameter { chi, chamber, kind };
        list.push(Param::DiscreteSeries { label: format!("X{}@b{chamber}", fmt_weight(&parameter.chi)), parameter });
    }
    if list.is_empty() {
        return Err(CliError::Usage("give --ds, --findim or --chi".into()));
    }
    let inputs = json!({
        "datum": group_echo(a.group, &datum),
        "ds": range_echo(&a.params.ds),
        "findim": range_echo(&a.params.findim),
        "chi": a.chi,
        "chamber": a.chamber,
        "limit": a.limit,
    });
    let mut report = Report::new("dirac-index", inputs);
    let mut entries = Vec::new();
    let mut t = Table::new(["label", "index"]);
    for p in &list {
        let idx = p.index(&datum).context("dirac index")?;
        let lambda = p.infinitesimal_character(&datum);
        let norms = idx.index.terms().keys().all(|tau| norm_matches(&datum, tau, &lambda));
        report.checks.push(Check::new(format!("{}: every K̃-type has ‖τ+ρ_c‖² = ‖Λ‖²", p.label()), norms));
        if let Param::DiscreteSeries { parameter, .. } = p {
            if parameter.kind == ParamKind::DiscreteSeries {
                report.checks.push(Check::new(format!("{}: single K̃-type", p.label()), idx.index.len() == 1));
            }
        }
        t.push([p.label().to_string(), fmt_virtual(&idx.index)]);
        entries.push(json!({ "param": p, "index": idx }));
    }
    report.results = json!({ "indices": entries });
    report.table = t;
    Ok(report)
}

pub fn pair(kind: PairKind, g: &GroupArgs, pa: &ParamArgs, exec: Execution) -> Result<Report, CliError> {
    let datum = load_datum(g)?;
    let name = match kind {
        PairKind::Dirac => "dirac",
        PairKind::Elliptic => "elliptic",
        PairKind::Ep => "ep",
    };
    let inputs = json!({ "datum": group_echo(g, &datum), "ds": range_echo(&pa.ds), "findim": range_echo(&pa.findim) });
    let mut report = Report::new(format!("pair {name}"), inputs);
    match kind {
        PairKind::Dirac => {
            let list = params(&datum, pa)?;
            if list.is_empty() {
                return Err(CliError::Usage("pair dirac needs --ds or --findim".into()));
            }
            let indices = dirac_pairings::exec::map(exec, &list, |p| p.index(&datum))
                .into_iter()
                .collect::<dirac_pairings::Result<Vec<_>>>()
                .context("dirac index")?;
            let gram = gram_matrix(exec, indices.len(), |i, j| dirac_pairing(&indices[i], &indices[j]).map(|p| p.value))
                .context("dirac pairing")?;
            let ds: Vec<usize> =
                (0..list.len()).filter(|&i| matches!(list[i], Param::DiscreteSeries { .. })).collect();
            if !ds.is_empty() {
                let identity = ds.iter().all(|&i| ds.iter().all(|&j| gram[i][j] == i64::from(i == j)));
                report.checks.push(Check::new("discrete series are orthonormal", identity));
            }
            let labels: Vec<String> = list.iter().map(|p| p.label().to_string()).collect();
            report.table = Table::gram(&labels, &gram);
            report.results = json!({ "labels": labels, "gram": gram });
        }
        PairKind::Elliptic => {
            if pa.findim.is_some() {
                return Err(CliError::Usage("pair elliptic takes --ds only".into()));
            }
            let list = params(&datum, pa)?;
            if list.is_empty() {
                return Err(CliError::Usage("pair elliptic needs --ds".into()));
            }
            let ps: Vec<HCParameter> = list
                .iter()
                .map(|p| match p {
                    Param::DiscreteSeries { parameter, .. } => parameter.clone(),
                    Param::FiniteDimensional { .. } => unreachable!("only --ds parameters"),
                })
                .collect();
            let r = verify_dirac_equals_elliptic(&datum, &ps, exec).context("elliptic pairing")?;
            let labels: Vec<String> = list.iter().map(|p| p.label().to_string()).collect();
            let ell: Vec<Vec<String>> = (0..ps.len())
                .map(|i| (0..ps.len()).map(|j| format_q(&r.gram_elliptic[(i, j)])).collect())
                .collect();
            let mut check = Check::new("elliptic Gram matrix equals Dirac Gram matrix", r.equal);
            if !r.equal {
                check = check.with_detail(format!("mismatches at {:?}", r.mismatches));
            }
            report.checks.push(check);
            report.table = Table::gram(&labels, &ell);
            report.results = json!({ "labels": labels, "gram": ell, "gram_dirac": r.gram_dirac, "singular": r.singular });
        }
        PairKind::Ep => {
            if pa.ds.is_some() {
                return Err(CliError::Usage("pair ep takes --findim only".into()));
            }
            let list = params(&datum, pa)?;
            if list.is_empty() {
                return Err(CliError::Usage("pair ep needs --findim".into()));
            }
            let hw: Vec<Weight> = list
                .iter()
                .map(|p| match p {
                    Param::FiniteDimensional { highest_weight, .. } => highest_weight.clone(),
                    Param::DiscreteSeries { .. } => unreachable!("only --findim parameters"),
                })
                .collect();
            let gram = gram_matrix(exec, hw.len(), |i, j| ep_pairing_finite_dim(&datum, &hw[i], &hw[j]))
                .context("Euler-Poincaré pairing")?;
            let indices: Vec<DiracIndex> =
                list.iter().map(|p| p.index(&datum)).collect::<dirac_pairings::Result<_>>().context("dirac index")?;
            let dirac = gram_matrix(exec, hw.len(), |i, j| dirac_pairing(&indices[i], &indices[j]).map(|p| p.value))
                .context("dirac pairing")?;
            report.checks.push(Check::new("Euler-Poincaré pairing equals Dirac index pairing", gram == dirac));
            let labels: Vec<String> = list.iter().map(|p| p.label().to_string()).collect();
            report.table = Table::gram(&labels, &gram);
            report.results = json!({ "labels": labels, "gram": gram, "gram_dirac": dirac });
        }
    }
    Ok(report)
}

fn gram_matrix<F>(exec: Execution, n: usize, f: F) -> dirac_pairings::Result<Vec<Vec<i64>>>
where
    F: Fn(usize, usize) -> dirac_pairings::Result<i64> + Sync + Send,
{
    dirac_pairings::exec::grid(exec, n, n, f).into_iter().map(|row| row.into_iter().collect()).collect()
}

/// Lab diagonal exports appended to the perturbation suite.
pub fn lab_exports() -> dirac_pairings::Result<Vec<PerturbationInstance>> {
    let mut out = lab_perturbation_instances("sl2R", 6)?;
    out.extend(lab_perturbation_instances("su21", 0)?);
    Ok(out)
}

pub fn fredholm_check(suite: &str, seed: u64, instances: Option<usize>, exec: Execution) -> Result<Report, CliError> {
    let suites = parse_suites(suite).map_err(CliError::Usage)?;
    let inputs = json!({ "suite": suite, "seed": seed, "instances": instances });
    let mut report = Report::new("fredholm check", inputs);
    let exports = if suites.contains(&SuiteKind::Perturbation) { lab_exports().context("lab exports")? } else { Vec::new() };
    let mut t = Table::new(["suite", "instances", "passed", "failed", "skipped"]);
    let mut results = Vec::new();
    for s in suites {
        let total = instances.unwrap_or(s.default_instances() as usize);
        let (count, extra) = if s == SuiteKind::Perturbation {
            (total.saturating_sub(exports.len()), &exports[..exports.len().min(total)])
        } else {
            (total, &exports[..0])
        };
        let count = u32::try_from(count).map_err(|_| CliError::Usage("too many instances".into()))?;
        let r = run_suite(s, seed, count, extra, exec);
        let mut check = Check::new(format!("{} suite", s.name()), r.ok());
        if let Some(f) = r.failures.first() {
            check = check.with_detail(format!("{}: {}", f.instance, f.detail));
        }
        report.checks.push(check);
        t.push([s.name().to_string(), r.instances.to_string(), r.passed.to_string(), r.failed.to_string(), r.skipped.to_string()]);
        results.push(r);
    }
    report.table = t;
    report.results = json!({ "suites": results });
    Ok(report)
}

fn load_module(alg: &LabAlgebra, path: &Path) -> Result<(String, MatrixHCModule), CliError> {
    let err = |reason: String| CliError::ModuleLoad { path: path.display().to_string(), reason };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    let m = MatrixHCModule::from_json(alg, &text).map_err(|e| err(e.to_string()))?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, m))
}

pub fn lab(action: LabAction, group: &str, max: usize, modules: &[std::path::PathBuf], exec: Execution) -> Result<Report, CliError> {
    let alg = LabAlgebra::preset(group).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut mods = lab_modules(&alg, max).context("lab modules")?;
    for p in modules {
        mods.push(load_module(&alg, p)?);
    }
    let files: Vec<String> = modules.iter().map(|p| p.display().to_string()).collect();
    let inputs = json!({ "group": group, "max": max, "modules": files });
    match action {
        LabAction::Identities => {
            let mut report = Report::new("lab identities", inputs);
            let r = lab_identities_for(&alg, &mods, exec).context("lab identities")?;
            for m in &r.modules {
                let mut c = Check::new(format!("{}: D basis independent, D² formula, isotypic scalars", m.module), m.ok());
                if let Some(e) = &m.error {
                    c = c.with_detail(e.clone());
                }
                report.checks.push(c);
            }
            let mut t = Table::new(["x", "y", "hom_even", "hom_odd", "ext_dims", "index_st", "dirac_pairing", "ok"]);
            for p in &r.pairs {
                let mut c = Check::new(format!("{} -> {}: S/T and split identities", p.x, p.y), p.ok());
                if let Some(e) = &p.error {
                    c = c.with_detail(e.clone());
                }
                report.checks.push(c);
                let dims: Vec<String> = p.ext_dims.iter().map(ToString::to_string).collect();
                let opt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
                t.push([
                    p.x.clone(),
                    p.y.clone(),
                    p.hom_dims.0.to_string(),
                    p.hom_dims.1.to_string(),
                    dims.join(" "),
                    opt(p.index_st),
                    opt(p.dirac_pairing),
                    p.ok().to_string(),
                ]);
            }
            report.table = t;
            report.results = serde_json::to_value(&r).expect("report serializes");
            Ok(report)
        }
        LabAction::Conjecture => {
            let mut report = Report::new("lab conjecture", inputs);
            let r = lab_conjecture_for(&alg, &mods, exec).context("lab conjecture")?;
            let mut t = Table::new(["x", "y", "ep", "euler", "ind_d", "ind_D", "dirac", "equal"]);
            for row in &r.rows {
                report.checks.push(Check::new(
                    format!("{} -> {}: five routes agree", row.x, row.y),
                    row.all_equal && row.chain_dims_match,
                ));
                t.push([
                    row.x.clone(),
                    row.y.clone(),
                    row.ep_pairing.to_string(),
                    row.euler.to_string(),
                    row.index_d.to_string(),
                    row.index_dirac_part.to_string(),
                    row.dirac_pairing.to_string(),
                    row.all_equal.to_string(),
                ]);
            }
            report.table = t;
            report.results = serde_json::to_value(&r).expect("report serializes");
            Ok(report)
        }
    }
}
