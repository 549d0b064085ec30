use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use num_rational::Rational64;

use crate::chain::{homology_z, mapping_cone, ChainComplex, ChainMap, GradedBasis, Label, MapRelation, ValueFiltration};
use crate::matrix::{Coefficient, Matrix, NovikovContext};
use crate::rings::{NovikovElement, RingContext};
use crate::testutil::*;

fn circle() -> ChainComplex<i64> {
    ChainComplex::zero_differential(&(), basis(&[(0, 1), (1, 1)]))
}

fn int_map(m: Vec<Vec<i64>>, cols: usize) -> Matrix<i64> {
    Matrix::from_rows(&(), m, cols)
}

#[test]
fn zero_triple_is_signed_direct_sum() {
    let d = ChainComplex::new(&(), basis(&[(0, 2), (1, 1)]), [(1, int_map(vec![vec![1], vec![-1]], 1))]).unwrap();
    let t = MorseTriple::from_matrices(d.clone(), circle(), d.clone(), vec![], vec![], vec![]).unwrap();
    let c = t.assemble().unwrap();
    assert!(c.verify().is_empty());
    assert_eq!(c.dim(0), 3);
    assert_eq!(c.dim(1), 4);
    assert_eq!(c.dim(2), 1);
    // the shifted copy of D' carries -d
    assert_eq!(c.d(2).get(2, 0), &-1);
    assert_eq!(c.d(2).get(3, 0), &1);
}

#[test]
fn simple_cobordism_with_minus_identity_is_cone_of_identity() {
    let d = ChainComplex::new(&(), basis(&[(0, 2), (1, 1)]), [(1, int_map(vec![vec![1], vec![-1]], 1))]).unwrap();
    let empty = ChainComplex::zero_differential(&(), GradedBasis::empty());
    let minus_one = d.degrees().map(|i| (i, Matrix::identity(&(), d.dim(i)).neg())).collect();
    let t = MorseTriple::from_matrices(d.clone(), empty.clone(), d.clone(), vec![], vec![], minus_one).unwrap();
    let cone = mapping_cone(&ChainMap::identity(&d)).unwrap();
    assert_eq!(t.assemble().unwrap(), cone);
    assert!(t.continuation_map().unwrap().is_identity());

    // psi = +1 gives the cone of -1: isomorphic, still acyclic
    let one = d.degrees().map(|i| (i, Matrix::identity(&(), d.dim(i)))).collect();
    let t = MorseTriple::from_matrices(d.clone(), empty, d, vec![], vec![], one).unwrap();
    assert!(homology_z(&t.assemble().unwrap()).iter().all(|(_, h)| h.is_zero()));
}

#[test]
fn continuation_of_permutation_is_chain_map() {
    let d = ChainComplex::zero_differential(&(), basis(&[(0, 2)]));
    let swap = vec![(0, int_map(vec![vec![0, -1], vec![-1, 0]], 2))];
    let empty = ChainComplex::zero_differential(&(), GradedBasis::empty());
    let t = MorseTriple::from_matrices(d.clone(), empty, d, vec![], vec![], swap).unwrap();
    let f = t.continuation_map().unwrap();
    assert_eq!(f.at(0), int_map(vec![vec![0, 1], vec![1, 0]], 2));
}

#[test]
fn continuation_needs_simple_cobordism() {
    let t = MorseTriple::from_matrices(circle(), circle(), circle(), vec![], vec![], vec![]).unwrap();
    assert_eq!(t.continuation_map().unwrap_err(), CobordismError::NotSimple);
}

#[test]
fn bumped_psi_reports_identity() {
    let d = ChainComplex::new(&(), basis(&[(0, 1), (1, 1)]), [(1, int_map(vec![vec![0]], 1))]).unwrap();
    let d2 = ChainComplex::new(&(), basis(&[(0, 1), (1, 1)]), [(1, int_map(vec![vec![2]], 1))]).unwrap();
    let empty = ChainComplex::zero_differential(&(), GradedBasis::empty());
    let t = MorseTriple::from_matrices(d, empty, d2, vec![], vec![], vec![(0, int_map(vec![vec![1]], 1))]).unwrap();
    let v = t.validate();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].identity, TripleIdentity::PsiHomotopy);
    assert!(matches!(t.assemble(), Err(CobordismError::IdentityViolation(_))));
}

type Seeds = Vec<(i64, i64, i64, i64)>;

fn random_triple(ring: Arc<RingContext>, seeds: Seeds, dims: [[usize; 5]; 3]) -> MorseTriple<NovikovElement> {
    let ctx = NovikovContext::new(ring.clone(), None);
    let mut it = laurent_entries(ring, seeds, None).into_iter();
    let mut cx = |k: [usize; 5]| random_complex(&ctx, [k[0], k[1]], [k[2], k[3], k[4]], &mut it);
    let (d, f, dp) = (cx(dims[0]), cx(dims[1]), cx(dims[2]));
    let (theta, thetaprime, psi) = triple_maps(&d, &f, &dp, &mut it);
    MorseTriple::from_matrices(d, f, dp, theta, thetaprime, psi).unwrap()
}

fn triple_dims() -> impl Strategy<Value = [[usize; 5]; 3]> {
    let one = [0usize..2, 0usize..2, 0usize..2, 0usize..2, 0usize..2];
    [one.clone(), one.clone(), one]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn triple_identities_match_square_zero(
        ring in laurent_ring(),
        seeds in prop::collection::vec((-2i64..=2, -1i64..=1, -1i64..=2, 0i64..6), 600),
        dims in triple_dims(),
        bump in prop::option::of((0usize..3, 0usize..8, 0usize..8, 0i32..3, -2i64..=2)),
    ) {
        let mut t = random_triple(ring.clone(), seeds, dims);
        prop_assert!(t.validate().is_empty());
        prop_assert!(t.assemble().unwrap().verify().is_empty());
        if let Some((which, r, c, deg, v)) = bump {
            let map = match which { 0 => &mut t.theta, 1 => &mut t.thetaprime, _ => &mut t.psi };
            let mut m = map.at(deg);
            if m.rows() > 0 && m.cols() > 0 {
                let (r, c) = (r % m.rows(), c % m.cols());
                let e = m.get(r, c).add(&NovikovElement::from_int(&ring, v, None));
                m.set(r, c, e);
                let mut mats: Vec<_> = map.matrices().map(|(i, x)| (i, x.clone())).collect();
                for (i, x) in mats.iter_mut() { if *i == deg { *x = m.clone(); } }
                *map = ChainMap::new(map.source.clone(), map.target.clone(), map.shift, map.relation, mats).unwrap();
            }
        }
        prop_assert_eq!(t.validate().is_empty(), t.assemble_unchecked().verify().is_empty());
    }
}

/// Splitting data with `theta'` commuting and `theta''` anticommuting,
/// both null-homotopic.
fn random_splitting(ring: Arc<RingContext>, seeds: Seeds, dims: [[usize; 5]; 3]) -> SplittingData<NovikovElement> {
    let ctx = NovikovContext::new(ring.clone(), None);
    let mut it = laurent_entries(ring, seeds, None).into_iter();
    let mut cx = |k: [usize; 5]| random_complex(&ctx, [k[0], k[1]], [k[2], k[3], k[4]], &mut it);
    let (d, fp, fs) = (cx(dims[0]), cx(dims[1]), cx(dims[2]));
    let (tp, _) = null_map(&d, &fp, MapRelation::Commute, &mut it);
    let k: Vec<_> = (-1..=3).map(|i| (i, random_matrix(&ctx, d.dim(i), fs.dim(i), &mut it))).collect();
    let g = |i: i32| k.iter().find(|(j, _)| *j == i).unwrap().1.clone();
    let ts = fs.degrees().map(|i| (i, d.d(i).mul(&g(i)).sub(&g(i - 1).mul(&fs.d(i))))).collect();
    let tp = d.degrees().map(|i| (i, tp.at(i))).collect();
    SplittingData::from_matrices(d, fp, fs, tp, ts, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cokernel_of_p_h_is_cone_of_composite(
        ring in laurent_ring(),
        seeds in prop::collection::vec((-2i64..=2, -1i64..=1, -1i64..=2, 0i64..6), 600),
        dims in triple_dims(),
    ) {
        let s = random_splitting(ring, seeds, dims);
        let sc = s.splitting_complex().unwrap();
        prop_assert!(sc.complex.verify().is_empty());
        prop_assert!(sc.coker.verify().is_empty());
        prop_assert!(sc.coker_matches_cone());
        let glued = SplittingData { phi: Some(s.composite()), ..s.clone() };
        let cone = glued.attaching_cone().unwrap();
        prop_assert_eq!(&cone.complex, &sc.cone);
        let report = glue_check(glued.phi.as_ref().unwrap(), &s.thetaprime, &s.thetasecond).unwrap();
        prop_assert!(report.holds);
    }
}

fn int_splitting(
    d: ChainComplex<i64>,
    fp: ChainComplex<i64>,
    fs: ChainComplex<i64>,
    tp: Vec<(i32, Matrix<i64>)>,
    ts: Vec<(i32, Matrix<i64>)>,
    phi: Option<Vec<(i32, Matrix<i64>)>>,
) -> SplittingData<i64> {
    SplittingData::from_matrices(d, fp, fs, tp, ts, phi).unwrap()
}

#[test]
fn zero_theta_second_gives_split_cokernel() {
    let s = int_splitting(circle(), circle(), circle(), vec![(0, int_map(vec![vec![1]], 1)), (1, int_map(vec![vec![1]], 1))], vec![], None);
    let sc = s.splitting_complex().unwrap();
    assert!(sc.coker_matches_cone());
    assert!(sc.coker.d(1).is_zero());
    let betti: Vec<usize> = homology_z(&sc.coker).iter().map(|(_, h)| h.betti).collect();
    assert_eq!(betti, vec![2, 2]);
    // the collar part is acyclic, so C_h has the homology of the cokernel
    let nonzero = |c: &ChainComplex<i64>| homology_z(c).into_iter().filter(|(_, h)| !h.is_zero()).collect::<Vec<_>>();
    assert_eq!(nonzero(&sc.complex), nonzero(&sc.coker));
}

#[test]
fn empty_level_gives_attaching_cone_of_zero() {
    let empty = ChainComplex::zero_differential(&(), GradedBasis::empty());
    let s = int_splitting(empty, circle(), circle(), vec![], vec![], Some(vec![]));
    let sc = s.splitting_complex().unwrap();
    let cone = s.attaching_cone().unwrap();
    assert_eq!(sc.complex, cone.complex);
}

#[test]
fn identity_attaching_map_is_acyclic() {
    // F'' is F' shifted up one degree with negated differential
    let fp = ChainComplex::new(&(), basis(&[(0, 2), (1, 1)]), [(1, int_map(vec![vec![1], vec![-1]], 1))]).unwrap();
    let fs = ChainComplex::new(
        &(),
        GradedBasis::new([Label::new("a", 1), Label::new("b", 1), Label::new("c", 2)]).unwrap(),
        [(2, int_map(vec![vec![-1], vec![1]], 1))],
    )
    .unwrap();
    let empty = ChainComplex::zero_differential(&(), GradedBasis::empty());
    let phi = vec![(1, Matrix::identity(&(), 2)), (2, Matrix::identity(&(), 1))];
    let s = int_splitting(empty, fp, fs, vec![], vec![], Some(phi));
    let cone = s.attaching_cone().unwrap();
    assert!(homology_z(&cone.complex).iter().all(|(_, h)| h.is_zero()));
    assert!(cone.inclusion.defects().is_empty());
    assert!(cone.projection.defects().is_empty());
}

#[test]
fn missing_attaching_map() {
    let s = int_splitting(circle(), circle(), circle(), vec![], vec![], None);
    assert_eq!(s.attaching_cone().unwrap_err(), CobordismError::MissingAttachingMap);
}

#[test]
fn glue_check_trivial_cases() {
    let c = circle();
    let fs = ChainComplex::zero_differential(&(), GradedBasis::new([Label::new("a", 1), Label::new("b", 2)]).unwrap());
    let phi_m = vec![(1, int_map(vec![vec![3]], 1)), (2, int_map(vec![vec![-2]], 1))];
    let phi = ChainMap::new(fs.clone(), c.clone(), -1, MapRelation::Anticommute, phi_m.clone()).unwrap();
    let theta2 = ChainMap::new(fs.clone(), c.clone(), -1, MapRelation::Anticommute, phi_m).unwrap();
    let report = glue_check(&phi, &ChainMap::identity(&c), &theta2).unwrap();
    assert!(report.holds);

    let zero = ChainMap::zero(&fs, &c, -1, MapRelation::Anticommute);
    let report = glue_check(&zero, &ChainMap::identity(&c), &theta2).unwrap();
    assert!(!report.holds);
    let values: Vec<_> = report.discrepancy.iter().map(|d| d.value.as_str()).collect();
    assert_eq!(values, vec!["-3", "2"]);
}

#[test]
fn triangularity_examples() {
    let ids = vec!["x".to_string(), "y".to_string()];
    let values = ValueFiltration::new([("x".to_string(), Rational64::from(1)), ("y".to_string(), Rational64::from(2))]);
    assert!(triangularity_check(&Matrix::identity(&(), 2), &ids, &values));
    assert!(triangularity_check(&int_map(vec![vec![-1, 5], vec![0, -1]], 2), &ids, &values));
    assert!(!triangularity_check(&int_map(vec![vec![1, 0], vec![3, 1]], 2), &ids, &values));
    assert!(!triangularity_check(&int_map(vec![vec![2, 0], vec![0, 1]], 2), &ids, &values));
    // reversing the values flips which triangle is allowed
    let rev = ValueFiltration::new([("x".to_string(), Rational64::from(2)), ("y".to_string(), Rational64::from(1))]);
    assert!(triangularity_check(&int_map(vec![vec![1, 0], vec![3, 1]], 2), &ids, &rev));
}

/// Square over a point: one cell in each block, `d(u) = x - y`,
/// `d(x) = d(y) = v` (up to the sign of `y`).
fn point_square(bump: i64) -> (ChainComplex<i64>, SquarePartition, ValueFiltration) {
    let b = GradedBasis::new([Label::new("v", 0), Label::new("x", 1), Label::new("y", 1), Label::new("u", 2)]).unwrap();
    let c = ChainComplex::new(
        &(),
        b,
        [(1, int_map(vec![vec![1, 1 + bump]], 2)), (2, int_map(vec![vec![1], vec![-1]], 1))],
    )
    .unwrap();
    let p = SquarePartition { f0: vec!["v".into()], f1: vec!["x".into()], f2: vec!["y".into()], f3: vec!["u".into()] };
    let values = ValueFiltration::new([("v".to_string(), Rational64::from(0)), ("u".to_string(), Rational64::new(1, 2))]);
    (c, p, values)
}

#[test]
fn setting_check_on_point_square() {
    let (c, p, values) = point_square(0);
    let r = setting_check(&c, &p, &values, Rational64::from(1)).unwrap();
    assert_eq!(r.checked_pairs, 1);
    assert!(r.passes());
    // pairs above epsilon are not checked
    let r = setting_check(&c, &p, &values, Rational64::new(1, 2)).unwrap();
    assert_eq!(r.checked_pairs, 0);

    let (c, p, values) = point_square(1);
    let r = setting_check(&c, &p, &values, Rational64::from(1)).unwrap();
    assert_eq!(r.violations, vec![SettingViolation { u: "u".into(), v: "v".into(), sum: -1 }]);
}

#[test]
fn setting_check_rejects_bad_partition() {
    let (c, mut p, values) = point_square(0);
    p.f1.push("y".into());
    assert!(matches!(setting_check(&c, &p, &values, Rational64::from(1)), Err(CobordismError::BadPartition(_))));
}

#[test]
fn triple_json_round_trip() {
    let d = ChainComplex::new(&(), basis(&[(0, 2), (1, 1)]), [(1, int_map(vec![vec![1], vec![-1]], 1))]).unwrap();
    let empty = ChainComplex::zero_differential(&(), GradedBasis::empty());
    let minus_one = d.degrees().map(|i| (i, Matrix::identity(&(), d.dim(i)).neg())).collect();
    let t = MorseTriple::from_matrices(d.clone(), empty, d, vec![], vec![], minus_one).unwrap();
    let text = serde_json::to_string(&t.to_doc()).unwrap();
    assert!(text.contains("\"Dprime\""));
    let back = MorseTriple::<i64>::from_doc(&(), &serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, t);
}
