use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::{Cover, Weight};
use crate::error::{Error, Result};
use crate::linalg::{q, ExactMatrix, Q};

const MAX_ROOTS: usize = 4096;
const MAX_WEYL: usize = 200_000;

/// Input document for a custom root datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    /// Simple roots of the reference positive system, doubled coordinates.
    pub simple_roots: Vec<Vec<i64>>,
    pub gram: Vec<Vec<i64>>,
    /// One flag per simple root; `true` means compact.
    pub compact_flags: Vec<bool>,
    /// ⟨μ,ν⟩ = μᵀ·gram·ν / form_denominator. Defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form_denominator: Option<i64>,
    /// K-integral weights are those with every coordinate divisible by this step. Defaults to 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_lattice_step: Option<i64>,
}

impl DatumConfig {
    pub fn preset(name: &str) -> Option<Self> {
        let cfg = match name {
            "sl2R" => DatumConfig {
                name: Some("sl2R".into()),
                rank: 1,
                simple_roots: vec![vec![2]],
                gram: vec![vec![1]],
                compact_flags: vec![false],
                form_denominator: Some(2),
                k_lattice_step: Some(1),
            },
            "su21" => DatumConfig {
                name: Some("su21".into()),
                rank: 2,
                simple_roots: vec![vec![4, -2], vec![-2, 4]],
                gram: vec![vec![2, 1], vec![1, 2]],
                compact_flags: vec![true, false],
                form_denominator: Some(12),
                k_lattice_step: Some(2),
            },
            "sp4R" => DatumConfig {
                name: Some("sp4R".into()),
                rank: 2,
                simple_roots: vec![vec![2, -2], vec![0, 4]],
                gram: vec![vec![1, 0], vec![0, 1]],
                compact_flags: vec![true, false],
                form_denominator: Some(4),
                k_lattice_step: Some(2),
            },
            _ => return None,
        };
        Some(cfg)
    }
}

pub const PRESETS: [&str; 3] = ["sl2R", "su21", "sp4R"];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeylGroupElement {
    pub matrix: Vec<Vec<i64>>,
    pub sign: i8,
}

impl WeylGroupElement {
    pub fn identity(rank: usize) -> Self {
        let matrix = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        WeylGroupElement { matrix, sign: 1 }
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        Weight(self.matrix.iter().map(|row| row.iter().zip(w.coords()).map(|(a, b)| a * b).sum()).collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.matrix.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum()).collect())
            .collect();
        WeylGroupElement { matrix, sign: self.sign * other.sign }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylKind {
    Full,
    Compact,
}

/// A positive system R⁺_b, listed as sorted indices into `RootDatum::roots`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub positive: Vec<usize>,
    /// Index into the full Weyl group of the element carrying b₁ to this chamber.
    pub element: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rho {
    pub rho: Weight,
    pub rho_c: Weight,
    pub rho_n: Weight,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    config: DatumConfig,
    name: String,
    rank: usize,
    gram: Vec<Vec<i64>>,
    form_denominator: i64,
    k_lattice_step: i64,
    roots: Vec<Weight>,
    compact: Vec<bool>,
    root_index: HashMap<Weight, usize>,
    weyl: Vec<WeylGroupElement>,
    compact_weyl: Vec<WeylGroupElement>,
    chambers: Vec<Chamber>,
    chamber_index: HashMap<Vec<usize>, usize>,
    rhos: Vec<Rho>,
}

impl RootDatum {
    pub fn preset(name: &str) -> Result<Self> {
        let cfg = DatumConfig::preset(name)
            .ok_or_else(|| Error::InvalidRootSystem(format!("unknown preset {name:?}")))?;
        Self::build(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: DatumConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::build(cfg)
    }

    pub fn build(config: DatumConfig) -> Result<Self> {
        let rank = config.rank;
        let bad = |m: String| Error::InvalidRootSystem(m);
        if rank == 0 {
            return Err(bad("rank must be positive".into()));
        }
        let gram = config.gram.clone();
        if gram.len() != rank || gram.iter().any(|r| r.len() != rank) {
            return Err(bad(format!("gram must be {rank}x{rank}")));
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(bad("gram is not symmetric".into()));
                }
            }
        }
        if !positive_definite(&gram) {
            return Err(Error::NonDefiniteForm);
        }
        let form_denominator = config.form_denominator.unwrap_or(1);
        let k_lattice_step = config.k_lattice_step.unwrap_or(2);
        if form_denominator <= 0 || k_lattice_step <= 0 {
            return Err(bad("form_denominator and k_lattice_step must be positive".into()));
        }
        let simple: Vec<Weight> = config.simple_roots.iter().cloned().map(Weight).collect();
        if simple.is_empty() || simple.len() > rank || simple.iter().any(|s| s.rank() != rank) {
            return Err(bad("need between 1 and rank simple roots of length rank".into()));
        }
        if config.compact_flags.len() != simple.len() {
            return Err(bad("one compact flag per simple root".into()));
        }
        let dot = |a: &Weight, b: &Weight| dot_with(&gram, a, b);
        let simple_matrix = ExactMatrix::from_i64(&(0..rank).map(|r| simple.iter().map(|s| s.0[r]).collect()).collect::<Vec<_>>());
        if simple_matrix.rank() != simple.len() {
            return Err(bad("simple roots are linearly dependent".into()));
        }
        for (i, a) in simple.iter().enumerate() {
            for (j, b) in simple.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (num, den) = (2 * dot(a, b), dot(b, b));
                if num % den != 0 || num > 0 {
                    return Err(bad(format!("Cartan entry ({i},{j}) = {num}/{den} is not a nonpositive integer")));
                }
            }
        }
        let reflections = simple
            .iter()
            .map(|a| reflection(&gram, a).ok_or_else(|| bad(format!("reflection in {a:?} is not integral"))))
            .collect::<Result<Vec<_>>>()?;

        let mut roots = simple.clone();
        let mut seen: HashSet<Weight> = simple.iter().cloned().collect();
        let mut queue: VecDeque<Weight> = simple.iter().cloned().collect();
        while let Some(r) = queue.pop_front() {
            for s in &reflections {
                let img = s.apply(&r);
                if seen.insert(img.clone()) {
                    roots.push(img.clone());
                    queue.push_back(img);
                    if roots.len() > MAX_ROOTS {
                        return Err(bad("root closure does not terminate".into()));
                    }
                }
            }
        }
        if roots.iter().any(|r| !seen.contains(&-r)) {
            return Err(bad("roots not closed under negation".into()));
        }
        if roots.iter().any(|r| r.0.iter().any(|x| x % k_lattice_step != 0)) {
            return Err(bad("roots must lie in the K-lattice".into()));
        }
        roots.sort_by(|a, b| root_order(&simple_matrix, a).cmp(&root_order(&simple_matrix, b)).then_with(|| a.cmp(b)));

        let mut compact = Vec::with_capacity(roots.len());
        for r in &roots {
            let c = coefficients(&simple_matrix, r).ok_or_else(|| bad(format!("{r:?} is not an integral combination of simple roots")))?;
            if !(c.iter().all(|x| *x >= 0) || c.iter().all(|x| *x <= 0)) {
                return Err(bad(format!("root {r:?} has mixed-sign coefficients")));
            }
            let parity: i64 = c.iter().zip(&config.compact_flags).filter(|(_, &f)| !f).map(|(x, _)| x.abs()).sum();
            compact.push(parity % 2 == 0);
        }
        let dim_p = compact.iter().filter(|c| !**c).count();
        if dim_p % 2 != 0 {
            return Err(Error::OddNoncompactDimension(dim_p));
        }
        let root_index: HashMap<Weight, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        let weyl = close_group(rank, &reflections)?;
        let compact_refl: Vec<WeylGroupElement> = roots
            .iter()
            .zip(&compact)
            .filter(|(_, &c)| c)
            .map(|(r, _)| reflection(&gram, r).expect("reflection in a root of an integral system"))
            .collect();
        let compact_weyl = close_group(rank, &compact_refl)?;

        let positive_b1: Vec<usize> = (0..roots.len()).filter(|&i| is_positive(&simple_matrix, &roots[i])).collect();
        let mut chambers = Vec::with_capacity(weyl.len());
        let mut chamber_index = HashMap::new();
        for (e, w) in weyl.iter().enumerate() {
            let mut positive: Vec<usize> = positive_b1
                .iter()
                .map(|&i| root_index.get(&w.apply(&roots[i])).copied().ok_or_else(|| bad("Weyl group does not preserve roots".into())))
                .collect::<Result<_>>()?;
            positive.sort_unstable();
            if chamber_index.insert(positive.clone(), e).is_some() {
                return Err(bad("two Weyl elements give the same chamber".into()));
            }
            chambers.push(Chamber { positive, element: e, sign: w.sign });
        }

        let mut rhos = Vec::with_capacity(chambers.len());
        for ch in &chambers {
            let sum = |want_compact: Option<bool>| {
                let mut acc = Weight::zero(rank);
                for &i in &ch.positive {
                    if want_compact.is_none_or(|c| compact[i] == c) {
                        acc = &acc + &roots[i];
                    }
                }
                acc.halved().ok_or_else(|| bad("half-sum of positive roots is not representable in doubled coordinates".into()))
            };
            rhos.push(Rho { rho: sum(None)?, rho_c: sum(Some(true))?, rho_n: sum(Some(false))? });
        }

        let name = config.name.clone().unwrap_or_else(|| "custom".into());
        Ok(RootDatum {
            config,
            name,
            rank,
            gram,
            form_denominator,
            k_lattice_step,
            roots,
            compact,
            root_index,
            weyl,
            compact_weyl,
            chambers,
            chamber_index,
            rhos,
        })
    }

    pub fn config(&self) -> &DatumConfig {
        &self.config
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn form_denominator(&self) -> i64 {
        self.form_denominator
    }

    pub fn k_lattice_step(&self) -> i64 {
        self.k_lattice_step
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn is_compact(&self, root: usize) -> bool {
        self.compact[root]
    }

    pub fn compact_flags(&self) -> &[bool] {
        &self.compact
    }

    pub fn root_index(&self, w: &Weight) -> Option<usize> {
        self.root_index.get(w).copied()
    }

    pub fn dim_p(&self) -> usize {
        self.compact.iter().filter(|c| !**c).count()
    }

    /// Unnormalized integer pairing μᵀGν.
    pub fn dot(&self, a: &Weight, b: &Weight) -> i64 {
        dot_with(&self.gram, a, b)
    }

    /// ⟨μ,ν⟩ in the units of the invariant form.
    pub fn inner(&self, a: &Weight, b: &Weight) -> Q {
        Q::new(self.dot(a, b).into(), self.form_denominator.into())
    }

    pub fn norm2(&self, a: &Weight) -> Q {
        self.inner(a, a)
    }

    pub fn weyl_group(&self, which: WeylKind) -> &[WeylGroupElement] {
        match which {
            WeylKind::Full => &self.weyl,
            WeylKind::Compact => &self.compact_weyl,
        }
    }

    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    pub fn chamber(&self, i: usize) -> Result<&Chamber> {
        self.chambers.get(i).ok_or_else(|| Error::InvalidParameter(format!("no chamber {i}")))
    }

    pub fn chamber_of(&self, positive: &[usize]) -> Option<usize> {
        let mut p = positive.to_vec();
        p.sort_unstable();
        self.chamber_index.get(&p).copied()
    }

    /// The unique chamber in which `chi` is strictly dominant, if any.
    pub fn chamber_containing(&self, chi: &Weight) -> Option<usize> {
        let positive: Vec<usize> = (0..self.roots.len()).filter(|&i| self.dot(chi, &self.roots[i]) > 0).collect();
        if positive.len() * 2 != self.roots.len() {
            return None;
        }
        self.chamber_of(&positive)
    }

    pub fn rho_vectors(&self, chamber: usize) -> Result<&Rho> {
        self.rhos.get(chamber).ok_or_else(|| Error::InvalidParameter(format!("no chamber {chamber}")))
    }

    pub fn reference_rho(&self) -> &Rho {
        &self.rhos[0]
    }

    pub fn positive_roots(&self, chamber: usize) -> Vec<&Weight> {
        self.chambers[chamber].positive.iter().map(|&i| &self.roots[i]).collect()
    }

    pub fn compact_positive(&self, chamber: usize) -> Vec<&Weight> {
        self.chambers[chamber].positive.iter().filter(|&&i| self.compact[i]).map(|&i| &self.roots[i]).collect()
    }

    pub fn noncompact_positive(&self, chamber: usize) -> Vec<&Weight> {
        self.chambers[chamber].positive.iter().filter(|&&i| !self.compact[i]).map(|&i| &self.roots[i]).collect()
    }

    /// Dominance for the fixed compact positive system R_k⁺ = R_k ∩ R⁺(b₁).
    pub fn is_k_dominant(&self, mu: &Weight) -> bool {
        self.compact_positive(0).iter().all(|a| self.dot(mu, a) >= 0)
    }

    pub fn is_k_regular_dominant(&self, mu: &Weight) -> bool {
        self.compact_positive(0).iter().all(|a| self.dot(mu, a) > 0)
    }

    pub fn is_dominant_in(&self, mu: &Weight, chamber: usize) -> bool {
        self.positive_roots(chamber).iter().all(|a| self.dot(mu, a) >= 0)
    }

    pub fn on_k_lattice(&self, mu: &Weight) -> bool {
        mu.0.iter().all(|x| x % self.k_lattice_step == 0)
    }

    /// K-lattice for `Cover::K`, the coset ρ_n(b₁) + Λ_K for `Cover::KTilde`.
    pub fn on_cover(&self, mu: &Weight, cover: Cover) -> bool {
        match cover {
            Cover::K => self.on_k_lattice(mu),
            Cover::KTilde => self.on_k_lattice(&(mu - &self.rhos[0].rho_n)),
        }
    }

    pub fn check_cover(&self, mu: &Weight, cover: Cover) -> Result<()> {
        if mu.rank() != self.rank {
            return Err(Error::ShapeMismatch(format!("weight {mu:?} has rank {} not {}", mu.rank(), self.rank)));
        }
        if !self.on_cover(mu, cover) {
            return Err(Error::OffLattice(mu.0.clone(), cover.name()));
        }
        Ok(())
    }

    /// Some `w ∈ W_k` with `w·mu` R_k⁺-dominant, and that image.
    pub fn k_dominant_conjugate(&self, mu: &Weight) -> (Weight, &WeylGroupElement) {
        self.compact_weyl
            .iter()
            .map(|w| (w.apply(mu), w))
            .find(|(img, _)| self.is_k_dominant(img))
            .expect("every W_k-orbit meets the dominant chamber")
    }

    /// The longest element of W_k.
    pub fn compact_longest(&self) -> &WeylGroupElement {
        let rho_c = &self.rhos[0].rho_c;
        let target = -rho_c;
        self.compact_weyl.iter().find(|w| w.apply(rho_c) == target).expect("W_k has a longest element")
    }

    /// Compact positive roots of `chamber`, as indices.
    fn compact_positive_set(&self, chamber: usize) -> Vec<usize> {
        self.chambers[chamber].positive.iter().copied().filter(|&i| self.compact[i]).collect()
    }

    /// The `s ∈ W_k` carrying the compact positive system of `chamber` to R_k⁺.
    pub fn compact_normalizer(&self, chamber: usize) -> &WeylGroupElement {
        let reference = self.compact_positive_set(0);
        let mine: Vec<&Weight> = self.compact_positive(chamber);
        self.compact_weyl
            .iter()
            .find(|s| {
                let mut img: Vec<usize> = mine.iter().map(|r| self.root_index[&s.apply(r)]).collect();
                img.sort_unstable();
                img == reference
            })
            .expect("W_k acts transitively on compact positive systems")
    }

    /// Image of a chamber under a Weyl group element.
    pub fn act_on_chamber(&self, w: &WeylGroupElement, chamber: usize) -> usize {
        let img: Vec<usize> = self.chambers[chamber].positive.iter().map(|&i| self.root_index[&w.apply(&self.roots[i])]).collect();
        self.chamber_of(&img).expect("Weyl group permutes chambers")
    }

}

fn dot_with(gram: &[Vec<i64>], a: &Weight, b: &Weight) -> i64 {
    let mut s = 0;
    for (i, x) in a.0.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.0.iter().enumerate() {
            s += x * gram[i][j] * y;
        }
    }
    s
}

fn positive_definite(gram: &[Vec<i64>]) -> bool {
    let m = ExactMatrix::from_i64(gram);
    (1..=gram.len()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        m.select(&idx, &idx).determinant().is_some_and(|d| d.is_positive())
    })
}

fn reflection(gram: &[Vec<i64>], a: &Weight) -> Option<WeylGroupElement> {
    let n = a.rank();
    let aa = dot_with(gram, a, a);
    if aa <= 0 {
        return None;
    }
    let ga: Vec<i64> = (0..n).map(|c| (0..n).map(|k| gram[c][k] * a.0[k]).sum()).collect();
    let mut matrix = vec![vec![0; n]; n];
    for r in 0..n {
        for c in 0..n {
            let num = 2 * a.0[r] * ga[c];
            if num % aa != 0 {
                return None;
            }
            matrix[r][c] = i64::from(r == c) - num / aa;
        }
    }
    Some(WeylGroupElement { matrix, sign: -1 })
}

fn close_group(rank: usize, gens: &[WeylGroupElement]) -> Result<Vec<WeylGroupElement>> {
    let id = WeylGroupElement::identity(rank);
    let mut out = vec![id.clone()];
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::from([id.matrix.clone()]);
    let mut head = 0;
    while head < out.len() {
        let w = out[head].clone();
        head += 1;
        for s in gens {
            let ws = w.compose(s);
            if seen.insert(ws.matrix.clone()) {
                out.push(ws);
                if out.len() > MAX_WEYL {
                    return Err(Error::InvalidRootSystem("Weyl group is infinite or too large".into()));
                }
            }
        }
    }
    for w in &mut out {
        w.sign = integer_det_sign(&w.matrix);
    }
    Ok(out)
}

fn integer_det_sign(m: &[Vec<i64>]) -> i8 {
    let d = ExactMatrix::from_i64(m).determinant().expect("square");
    if d.is_positive() {
        1
    } else {
        -1
    }
}

fn coefficients(simple: &ExactMatrix, r: &Weight) -> Option<Vec<i64>> {
    let b: Vec<Q> = r.0.iter().map(|&x| q(x)).collect();
    let x = simple.solve(&b)?;
    if simple.apply(&x) != b {
        return None;
    }
    x.iter()
        .map(|v| v.is_integer().then(|| i64::try_from(v.to_integer()).ok()).flatten())
        .collect()
}

fn is_positive(simple: &ExactMatrix, r: &Weight) -> bool {
    coefficients(simple, r).is_some_and(|c| c.iter().all(|x| *x >= 0) && c.iter().any(|x| !x.is_zero()))
}

/// Positive roots first by height, then negatives by depth.
fn root_order(simple: &ExactMatrix, r: &Weight) -> (i64, i64) {
    let h: i64 = coefficients(simple, r).map(|c| c.iter().sum()).unwrap_or(0);
    if h > 0 {
        (0, h)
    } else {
        (1, -h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_counts() {
        let cases = [("sl2R", 2, 2, 1, 2), ("su21", 6, 6, 2, 4), ("sp4R", 8, 8, 2, 6)];
        for (name, roots, w, wk, dim_p) in cases {
            let d = RootDatum::preset(name).unwrap();
            assert_eq!(d.roots().len(), roots, "{name}");
            assert_eq!(d.weyl_group(WeylKind::Full).len(), w, "{name}");
            assert_eq!(d.weyl_group(WeylKind::Compact).len(), wk, "{name}");
            assert_eq!(d.chambers().len(), w, "{name}");
            assert_eq!(d.dim_p(), dim_p, "{name}");
        }
    }

    #[test]
    fn sl2_rho() {
        let d = RootDatum::preset("sl2R").unwrap();
        let r = d.rho_vectors(0).unwrap();
        assert_eq!((r.rho.clone(), r.rho_c.clone(), r.rho_n.clone()), (Weight::from([1]), Weight::from([0]), Weight::from([1])));
        assert_eq!(d.norm2(&Weight::from([2])), q(2));
    }

    #[test]
    fn su21_reference_data() {
        let d = RootDatum::preset("su21").unwrap();
        assert_eq!(d.reference_rho().rho_n, Weight::from([0, 3]));
        assert_eq!(d.reference_rho().rho_c, Weight::from([2, -1]));
        for c in 0..6 {
            assert_eq!(d.noncompact_positive(c).len(), 2);
        }
    }

    #[test]
    fn rejections() {
        let mut cfg = DatumConfig::preset("su21").unwrap();
        cfg.gram = vec![vec![1, 2], vec![2, 1]];
        assert_eq!(RootDatum::build(cfg).unwrap_err(), Error::NonDefiniteForm);

        // Cartan entry 2·⟨a,b⟩/⟨b,b⟩ = 4/5 is not an integer.
        let bad = DatumConfig {
            name: None,
            rank: 2,
            simple_roots: vec![vec![2, 0], vec![1, 2]],
            gram: vec![vec![1, 0], vec![0, 1]],
            compact_flags: vec![true, false],
            form_denominator: None,
            k_lattice_step: Some(1),
        };
        assert!(matches!(RootDatum::build(bad), Err(Error::InvalidRootSystem(_))));
    }
}
