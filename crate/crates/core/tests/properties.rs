use dirac_pairings::fredholm::random::{instance_rng, random_complex, random_invertible, random_matrix, random_pair};
use dirac_pairings::fredholm::{euler_via_pair, fredholm_index, fredholm_index_by_ranks, FredholmPairData};
use dirac_pairings::lab::{build_spinor_matrices, dirac_matrix, verify_parthasarathy, LabAlgebra, MatrixHCModule};
use dirac_pairings::linalg::{q, ExactMatrix, Q};
use dirac_pairings::spin::{dirac_index_finite_dim, dirac_pairing, ep_pairing_finite_dim};
use dirac_pairings::weights::{decompose, dim, dual, expand, tensor, Cover, RootDatum, VirtualCharacter, Weight};
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        ExactMatrix::from_i64(&v.chunks(cols.max(1)).take(rows).map(<[i64]>::to_vec).collect::<Vec<_>>())
    })
}

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..6, 1usize..6, 1usize..6)
}

/// K-dominant weights on the K-lattice of `d`, with small coordinates.
fn k_dominant(d: &RootDatum, coords: &[i64]) -> Option<Weight> {
    let step = d.k_lattice_step();
    let w = Weight::from(coords.iter().map(|c| c * step).collect::<Vec<_>>());
    d.compact_positive(0).iter().all(|b| d.dot(&w, b) >= 0).then_some(w)
}

fn virtual_char(d: &RootDatum, terms: &[(Vec<i64>, i64)]) -> VirtualCharacter {
    VirtualCharacter::from_terms(Cover::K, terms.iter().filter_map(|(c, m)| k_dominant(d, c).map(|w| (w, *m))))
}

fn terms(rank: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, rank), -2i64..=2), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bareiss_and_rref_ranks_agree(m in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| int_matrix(r, c))) {
        prop_assert_eq!(m.rank(), m.rank_rref());
        prop_assert_eq!(m.rank() + m.nullity(), m.cols());
        for v in m.kernel() {
            prop_assert!(m.apply(&v).iter().all(|x| *x == Q::from_integer(0.into())));
        }
    }

    #[test]
    fn index_routes_agree((x, y, _) in dims(), seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 90, 0);
        let s = random_matrix(&mut rng, y, x, 2, 0.4);
        let t = random_matrix(&mut rng, x, y, 2, 0.4);
        let p = FredholmPairData::new(s.clone(), t.clone()).unwrap();
        let a = fredholm_index(&p).unwrap();
        prop_assert_eq!(&a, &fredholm_index_by_ranks(&p).unwrap());
        // Finite dimensions: ind = (dim X − rank TS) − (dim Y − rank ST).
        let expected = (x as i64 - (&t * &s).rank() as i64) - (y as i64 - (&s * &t).rank() as i64);
        prop_assert_eq!(a.index, expected);
    }

    #[test]
    fn index_is_invariant_under_change_of_basis(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 91, 0);
        let p = random_pair(&mut rng, 6);
        let (px, py) = (random_invertible(&mut rng, p.dim_x()), random_invertible(&mut rng, p.dim_y()));
        let qx = px.inverse().unwrap();
        let qy = py.inverse().unwrap();
        let conj = FredholmPairData::new(&(&py * &p.s) * &qx, &(&px * &p.t) * &qy).unwrap();
        prop_assert_eq!(fredholm_index(&p).unwrap().index, fredholm_index(&conj).unwrap().index);
    }

    #[test]
    fn euler_characteristic_is_the_index(seed in any::<u64>(), len in 1usize..6) {
        let mut rng = instance_rng(seed, 92, 0);
        let c = random_complex(&mut rng, len, 6);
        let r = euler_via_pair(&c).unwrap();
        prop_assert!(r.holds);
        prop_assert_eq!(r.index, c.chain_euler());
    }

    #[test]
    fn tensor_is_commutative_with_multiplicative_dimension(a in terms(2), b in terms(2)) {
        let d = RootDatum::preset("su21").unwrap();
        let (va, vb) = (virtual_char(&d, &a), virtual_char(&d, &b));
        let ab = tensor(&d, &va, &vb).unwrap();
        prop_assert_eq!(&ab, &tensor(&d, &vb, &va).unwrap());
        prop_assert_eq!(dim(&d, &ab), dim(&d, &va) * dim(&d, &vb));
    }

    #[test]
    fn decompose_inverts_expand(a in terms(2)) {
        let d = RootDatum::preset("su21").unwrap();
        let v = virtual_char(&d, &a);
        prop_assert_eq!(&decompose(&d, &expand(&d, &v).unwrap(), Cover::K).unwrap(), &v);
        prop_assert_eq!(&dual(&d, &dual(&d, &v)), &v);
    }

    #[test]
    fn pairings_are_symmetric(n in 0i64..6, m in 0i64..6) {
        let d = RootDatum::preset("sl2R").unwrap();
        let (x, y) = (Weight::from([n]), Weight::from([m]));
        prop_assert_eq!(ep_pairing_finite_dim(&d, &x, &y).unwrap(), ep_pairing_finite_dim(&d, &y, &x).unwrap());
        let (ix, iy) = (dirac_index_finite_dim(&d, &x).unwrap(), dirac_index_finite_dim(&d, &y).unwrap());
        prop_assert_eq!(dirac_pairing(&ix, &iy).unwrap().value, dirac_pairing(&iy, &ix).unwrap().value);
    }

    #[test]
    fn clifford_square_is_minus_the_form(group in prop::sample::select(vec!["sl2R", "su21"]), c in prop::collection::vec(-4i64..=4, 4)) {
        let alg = LabAlgebra::preset(group).unwrap();
        let sp = build_spinor_matrices(&alg).unwrap();
        let n = alg.p_basis().len();
        let x: Vec<Q> = c.iter().take(n).map(|&v| q(v)).collect();
        let g = sp.gamma_of(&x);
        let bxx: Q = alg.p_gram().apply(&x).iter().zip(&x).map(|(a, b)| a * b).sum();
        prop_assert_eq!(&g * &g, ExactMatrix::identity(sp.dim()).scale(&-bxx));
    }

    #[test]
    fn dirac_operator_is_odd_and_satisfies_parthasarathy(n in 0usize..7) {
        let alg = LabAlgebra::preset("sl2R").unwrap();
        let sp = build_spinor_matrices(&alg).unwrap();
        let x = MatrixHCModule::sl2_irreducible(&alg, n).unwrap();
        let d = dirac_matrix(&alg, &x, &sp);
        let eps = ExactMatrix::identity(x.dimension).kron(&sp.grading());
        prop_assert_eq!(&(&eps * &d) * &eps, -&d);
        prop_assert!(verify_parthasarathy(&alg, &x, &sp).is_ok());
    }
}
