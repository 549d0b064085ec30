use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::testutil::*;
use crate::matrix::{Matrix, NovikovContext};
use crate::rings::{NovikovElement, RingContext};


fn int_complex(dims: &[(i32, usize)], diffs: Vec<(i32, Vec<Vec<i64>>)>) -> ChainComplex<i64> {
    let b = basis(dims);
    let diffs = diffs
        .into_iter()
        .map(|(i, rows)| {
            let cols = b.dim(i);
            (i, Matrix::from_rows(&(), rows, cols))
        })
        .collect::<Vec<_>>();
    ChainComplex::new(&(), b, diffs).unwrap()
}

#[test]
fn circle_and_projective_plane_homology() {
    let circle = int_complex(&[(0, 1), (1, 1)], vec![(1, vec![vec![0]])]);
    let h = homology_z(&circle);
    assert_eq!(h[0].1.to_string(), "Z");
    assert_eq!(h[1].1.to_string(), "Z");

    let rp2 = int_complex(
        &[(0, 1), (1, 1), (2, 1)],
        vec![(1, vec![vec![0]]), (2, vec![vec![2]])],
    );
    let h = homology_z(&rp2);
    assert_eq!(h[1].1, HomologyGroup::new(0, vec![2]));
    assert!(h[2].1.is_zero());
}

#[test]
fn smith_form_known_matrix() {
    let m = Matrix::from_rows(&(), vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
    assert_eq!(smith_diagonal(&m), vec![2, 6, 12]);
}

#[test]
fn duplicate_label_rejected() {
    let err = GradedBasis::new([Label::new("a", 0), Label::new("a", 1)]).unwrap_err();
    assert_eq!(err, ChainError::DuplicateLabel("a".into()));
}

#[test]
fn cone_of_identity_is_acyclic() {
    let c = int_complex(&[(0, 2), (1, 3), (2, 1)], vec![(1, vec![vec![1, -1, 0], vec![-1, 1, 0]]), (2, vec![vec![1], vec![1], vec![0]])]);
    assert!(c.verify().is_empty());
    let cone = mapping_cone(&ChainMap::identity(&c)).unwrap();
    assert!(cone.verify().is_empty());
    assert!(homology_z(&cone).iter().all(|(_, h)| h.is_zero()));
}

#[test]
fn cone_of_zero_map_splits() {
    let c = int_complex(&[(0, 1), (1, 1)], vec![(1, vec![vec![0]])]);
    let cone = mapping_cone(&ChainMap::zero(&c, &c, 0, MapRelation::Commute)).unwrap();
    let betti: Vec<usize> = homology_z(&cone).iter().map(|(_, h)| h.betti).collect();
    assert_eq!(betti, vec![1, 2, 1]);
}

#[test]
fn non_chain_map_is_rejected() {
    let c = int_complex(&[(0, 1), (1, 1)], vec![(1, vec![vec![1]])]);
    let f = ChainMap::new(c.clone(), c, 0, MapRelation::Commute, [(0, Matrix::from_rows(&(), vec![vec![1]], 1))]).unwrap();
    assert!(matches!(mapping_cone(&f), Err(ChainError::NotAChainMap(_))));
}

#[test]
fn complex_json_round_trip() {
    let ring = RingContext::twisted(2, vec![vec![0, 1], vec![1, 0]]).unwrap();
    let ctx = NovikovContext::new(ring.clone(), Some(6));
    let b = GradedBasis::new([
        Label::with_value("p", 1, 3.into()),
        Label::with_value("q", 0, num_rational::Rational64::new(1, 2)),
    ])
    .unwrap();
    let e = NovikovElement::parse(&ring, "(1) + (-1)*x^[1,0]*z^1 + O(z^6)").unwrap();
    let c = ChainComplex::new(&ctx, b, [(1, Matrix::from_rows(&ctx, vec![vec![e]], 1))]).unwrap();
    let doc = c.to_doc();
    let text = serde_json::to_string(&doc).unwrap();
    let back: json::ComplexDoc = serde_json::from_str(&text).unwrap();
    let c2 = ChainComplex::<NovikovElement>::from_doc(&ctx, &back).unwrap();
    assert_eq!(c, c2);
    assert_eq!(c2.to_json(), c.to_json());
}

fn integral(n: i64) -> NovikovContext {
    NovikovContext::integral(Some(n))
}

fn nov_matrix(ctx: &NovikovContext, rows: Vec<Vec<&str>>, cols: usize) -> Matrix<NovikovElement> {
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|s| NovikovElement::parse(&ctx.ring, s).unwrap()).collect())
        .collect();
    Matrix::from_rows(ctx, rows, cols)
}

#[test]
fn novikov_rank_of_one_minus_z_complex() {
    let ctx = integral(8);
    let b = basis(&[(0, 1), (1, 1)]);
    let d = nov_matrix(&ctx, vec![vec!["(1) + (-1)*z^1"]], 1);
    let c = ChainComplex::new(&ctx, b, [(1, d)]).unwrap();
    assert_eq!(novikov_ranks(&c, 8).unwrap(), vec![(0, 0), (1, 0)]);
}

#[test]
fn novikov_rank_ignores_terms_beyond_certified_degree() {
    let ctx = integral(10);
    let m = nov_matrix(&ctx, vec![vec!["(1)*z^5", "(1)*z^6"], vec!["(2)*z^5", "(2)*z^6 + (1)*z^9"]], 2);
    assert_eq!(novikov_rank(&m, 4).unwrap(), 0);
    assert_eq!(novikov_rank(&m, 8).unwrap(), 1);
    assert_eq!(novikov_rank(&m, 10).unwrap(), 2);
}

#[test]
fn novikov_rank_reports_exhausted_precision() {
    let ring = RingContext::integers();
    let ctx = integral(3);
    let m = Matrix::from_rows(&ctx, vec![vec![NovikovElement::zero(&ring, Some(3))]], 1);
    assert_eq!(novikov_rank(&m, 3).unwrap(), 0);
    assert_eq!(
        novikov_rank(&m, 5),
        Err(ChainError::PrecisionExhausted { needed: 5, available: 3 })
    );
}

#[test]
fn novikov_ranks_need_integral_ring() {
    let ctx = NovikovContext::new(RingContext::untwisted(1), Some(4));
    let c = ChainComplex::<NovikovElement>::zero_differential(&ctx, basis(&[(0, 1)]));
    assert_eq!(novikov_ranks(&c, 4), Err(ChainError::WrongCoefficients));
}

fn cone_cases() -> impl Strategy<Value = (Arc<RingContext>, Vec<(i64, i64, i64, i64)>, [usize; 2], [usize; 3], [usize; 2], [usize; 3])> {
    (
        laurent_ring(),
        prop::collection::vec((-2i64..=2, -1i64..=1, -1i64..=3, 0i64..6), 400),
        [0usize..3, 0usize..3],
        [0usize..2, 0usize..2, 0usize..2],
        [0usize..3, 0usize..3],
        [0usize..2, 0usize..2, 0usize..2],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_complexes_and_cones_square_to_zero(
        (ring, seeds, c1, f1, c2, f2) in cone_cases(),
        exact in any::<bool>(),
        anti in any::<bool>(),
    ) {
        let precision = if exact { None } else { Some(8) };
        let ctx = NovikovContext::new(ring.clone(), precision);
        let mut it = laurent_entries(ring, seeds, precision).into_iter();
        let c = random_complex(&ctx, c1, f1, &mut it);
        let d = random_complex(&ctx, c2, f2, &mut it);
        prop_assert!(c.verify().is_empty());
        let relation = if anti { MapRelation::Anticommute } else { MapRelation::Commute };
        let (f, _) = null_map(&c, &d, relation, &mut it);
        prop_assert!(f.defects().is_empty());
        let cone = mapping_cone(&f).unwrap();
        prop_assert!(cone.verify().is_empty());
    }

    #[test]
    fn cone_iso_is_chain_isomorphism(
        (ring, seeds, c1, f1, c2, f2) in cone_cases(),
    ) {
        let ctx = NovikovContext::new(ring.clone(), None);
        let mut it = laurent_entries(ring, seeds, None).into_iter();
        let c = random_complex(&ctx, c1, f1, &mut it);
        let d = random_complex(&ctx, c2, f2, &mut it);
        let (f, _) = null_map(&c, &d, MapRelation::Commute, &mut it);
        let (g, psi) = null_map(&c, &d, MapRelation::Commute, &mut it);
        // f' = f + d psi + psi d
        let to_mats: Vec<_> = c.degrees().map(|i| (i, f.at(i).add(&g.at(i)))).collect();
        let to = ChainMap::new(c.clone(), d.clone(), 0, MapRelation::Commute, to_mats).unwrap();
        let h = ChainHomotopy::new(f.clone(), to, psi).unwrap();
        prop_assert!(h.holds());
        let iso = cone_iso(&h).unwrap();
        let back = cone_iso(&h.reverse()).unwrap();
        prop_assert!(back.compose(&iso).unwrap().is_identity());
        prop_assert!(iso.compose(&back).unwrap().is_identity());
    }

    #[test]
    fn integer_homology_euler_characteristic(
        seeds in prop::collection::vec(-3i64..=3, 200),
        c1 in [0usize..3, 0usize..3],
        f1 in [0usize..3, 0usize..3, 0usize..3],
    ) {
        let mut it = seeds.into_iter();
        let c = random_complex::<i64>(&(), c1, f1, &mut it);
        let h = homology_z(&c);
        let betti: Vec<usize> = (0..3).map(|i| h.iter().find(|(d, _)| *d == i).map_or(0, |(_, g)| g.betti)).collect();
        prop_assert_eq!(betti, f1.to_vec());
        prop_assert!(h.iter().all(|(_, g)| g.torsion.is_empty()));
    }
}
