//! Standard example complexes.

use std::collections::BTreeSet;

use crate::dmt::{level_id, prism_id, random_acyclic_field, Cell, CellComplex, FundamentalDomain, SplitManifold, VectorField};

/// Boundary of a triangle.
pub fn circle() -> CellComplex {
    CellComplex::from_simplicial(&[vec![0, 1], vec![1, 2], vec![0, 2]]).expect("valid")
}

/// Boundary of a tetrahedron.
pub fn sphere() -> CellComplex {
    CellComplex::from_simplicial(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).expect("valid")
}

/// The 7-vertex torus.
pub fn torus() -> CellComplex {
    let facets: Vec<Vec<usize>> = (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    CellComplex::from_simplicial(&facets).expect("valid")
}

/// The 6-vertex real projective plane.
pub fn projective_plane() -> CellComplex {
    let facets = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
        [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
    ];
    CellComplex::from_simplicial(&facets.map(|f| f.to_vec())).expect("valid")
}

/// A 9-vertex Klein bottle: the 3x3 grid with one side glued by a flip.
pub fn klein_bottle() -> CellComplex {
    let v = |i: usize, j: usize| -> usize {
        let (i, j) = if j == 3 { ((3 - i % 3) % 3, 0) } else { (i % 3, j) };
        3 * i + j
    };
    let mut facets = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            facets.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            facets.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    CellComplex::from_simplicial(&facets).expect("valid")
}

/// The closed complexes used throughout the tests.
pub fn closed_complexes() -> Vec<(&'static str, CellComplex)> {
    vec![
        ("circle", circle()),
        ("sphere", sphere()),
        ("torus", torus()),
        ("projective_plane", projective_plane()),
        ("klein_bottle", klein_bottle()),
    ]
}

/// Two disjoint points `a`, `b`.
pub fn two_points() -> CellComplex {
    CellComplex::new(vec![Cell::new("a", 0, vec![]), Cell::new("b", 0, vec![])]).expect("valid")
}

/// Two disjoint copies of [`circle`], ids prefixed `a` and `b`.
pub fn two_circles() -> CellComplex {
    let c = circle();
    CellComplex::union(&[&c.relabeled(|id| format!("a{id}")).expect("valid"), &c.relabeled(|id| format!("b{id}")).expect("valid")])
        .expect("disjoint")
}

/// An arc from `a` through `mid` to `b`.
fn arc(mid: &str) -> CellComplex {
    CellComplex::new(vec![
        Cell::new("a", 0, vec![]),
        Cell::new("b", 0, vec![]),
        Cell::new(mid, 0, vec![]),
        Cell::new("e1", 1, vec![(mid.into(), 1), ("a".into(), -1)]),
        Cell::new("e2", 1, vec![("b".into(), 1), (mid.into(), -1)]),
    ])
    .expect("valid")
}

/// `C x [0, k]` with the two ends renamed to the `a` and `b` copies of `C`.
fn annulus(k: usize) -> CellComplex {
    let c = circle();
    c.product_interval(k)
        .relabeled(|id| {
            let (base, rest) = id.split_once('@').expect("product id");
            match rest {
                "0" => format!("a{base}"),
                r if r == k.to_string() => format!("b{base}"),
                _ => id.to_string(),
            }
        })
        .expect("valid")
}

/// A splitting example: the lower and upper pieces with their fields and
/// the level set along which they are glued.
#[derive(Clone, Debug)]
pub struct SplittingExample {
    pub name: &'static str,
    pub lower: CellComplex,
    pub lower_field: VectorField,
    pub level: CellComplex,
    /// The field on the level set used for the splitting collar.
    pub level_field: VectorField,
    pub upper: CellComplex,
    pub upper_field: VectorField,
}

impl SplittingExample {
    pub fn manifold(&self) -> SplitManifold {
        SplitManifold::glue(&self.lower, &self.lower_field, &self.level, &self.upper, &self.upper_field)
            .expect("corpus splittings are valid")
    }

    /// Same pieces with seeded random fields in place of the given ones.
    pub fn randomized(&self, seed: u64) -> Self {
        let frozen = self.level.cells().iter().map(|c| c.id.clone()).collect();
        SplittingExample {
            lower_field: random_acyclic_field(&self.lower, seed, &BTreeSet::new(), 1.0),
            upper_field: random_acyclic_field(&self.upper, seed.wrapping_add(1), &frozen, 1.0),
            ..self.clone()
        }
    }
}

fn pairs(p: &[(&str, &str)]) -> VectorField {
    VectorField::new(p.iter().map(|(a, b)| (a.to_string(), b.to_string())))
}

/// The circle cut along a regular level, which is two points.
pub fn circle_splitting() -> SplittingExample {
    SplittingExample {
        name: "circle",
        lower: arc("min"),
        lower_field: pairs(&[("a", "e1"), ("b", "e2")]),
        level: two_points(),
        level_field: VectorField::empty(),
        upper: arc("max"),
        upper_field: pairs(&[("max", "e1")]),
    }
}

/// The sphere cut along its equator into two cones on a triangle.
pub fn sphere_splitting() -> SplittingExample {
    let disk = circle().cone("s");
    SplittingExample {
        name: "sphere",
        lower_field: pairs(&[("0", "s*0"), ("1", "s*1"), ("2", "s*2"), ("0-1", "s*0-1"), ("1-2", "s*1-2")]),
        lower: disk.clone(),
        level: circle(),
        level_field: pairs(&[("1", "0-1"), ("2", "1-2")]),
        upper_field: pairs(&[("s", "s*0"), ("s*1", "s*0-1"), ("s*2", "s*0-2")]),
        upper: disk,
    }
}

/// The torus cut along two meridians into two annuli, with perfect
/// fields on both halves.
pub fn torus_splitting() -> SplittingExample {
    let ann = annulus(2);
    SplittingExample {
        name: "torus",
        lower_field: pairs(&[
            ("0@0:1", "0-2@0:1"), ("0-1@1", "0-1@1:2"), ("0@1", "0-2@1"), ("1@0:1", "0-1@0:1"),
            ("a2", "a0-2"), ("a1", "a1-2"), ("b1-2", "1-2@1:2"), ("2@1:2", "0-2@1:2"),
            ("b0", "0@1:2"), ("1@1", "1@1:2"), ("1-2@1", "1-2@0:1"), ("b2", "b0-2"),
            ("2@1", "2@0:1"), ("b1", "b0-1"),
        ]),
        lower: ann.clone(),
        level: two_circles(),
        level_field: pairs(&[("a1", "a0-1"), ("a2", "a1-2"), ("b1", "b0-1"), ("b2", "b1-2")]),
        upper_field: pairs(&[
            ("1-2@1", "1-2@0:1"), ("0@0:1", "0-1@0:1"), ("0@1:2", "0-2@1:2"), ("1@1:2", "1-2@1:2"),
            ("1@1", "1@0:1"), ("0-1@1", "0-1@1:2"), ("2@1", "2@1:2"), ("0@1", "0-2@1"),
        ]),
        upper: ann,
    }
}

/// The torus splitting with non-perfect fields whose flow lines cross the
/// level set away from the critical cells of `level_field`.
pub fn torus_splitting_skewed() -> SplittingExample {
    let ann = annulus(2);
    SplittingExample {
        name: "torus_skewed",
        lower_field: pairs(&[
            ("a0", "0@0:1"), ("a1", "1@0:1"), ("a2", "2@0:1"),
            ("b0", "0@1:2"), ("b1", "1@1:2"), ("b2", "2@1:2"),
            ("1@1", "1-2@1"), ("2@1", "0-2@1"),
            ("a0-1", "0-1@0:1"), ("a1-2", "1-2@0:1"),
            ("b0-1", "0-1@1:2"), ("b1-2", "1-2@1:2"),
        ]),
        lower: ann.clone(),
        level: two_circles(),
        level_field: pairs(&[("a1", "a0-1"), ("a2", "a1-2"), ("b1", "b0-1"), ("b2", "b1-2")]),
        upper_field: pairs(&[
            ("0@1", "0@0:1"), ("1@1", "1@0:1"), ("2@1", "2@0:1"),
            ("0-1@1", "0-1@0:1"), ("1-2@1", "1-2@0:1"),
            ("0@1:2", "0-1@1:2"), ("1@1:2", "1-2@1:2"),
        ]),
        upper: ann,
    }
}

pub fn splitting_examples() -> Vec<SplittingExample> {
    vec![circle_splitting(), sphere_splitting(), torus_splitting()]
}

/// A single point `p`.
pub fn point() -> CellComplex {
    CellComplex::new(vec![Cell::new("p", 0, vec![])]).expect("valid")
}

/// Transverse pairs `sigma@t -> sigma@(t-1):t` on `N x [0, m]`, except for
/// the cells listed in `skip`.
pub fn transverse_field(n: &CellComplex, m: usize, skip: &[&str]) -> VectorField {
    let mut v = VectorField::empty();
    for t in 1..=m {
        for c in n.cells() {
            let (a, b) = (level_id(&c.id, t), prism_id(&c.id, t));
            if !skip.contains(&a.as_str()) && !skip.contains(&b.as_str()) {
                v.push(a, b);
            }
        }
    }
    v
}

/// The circle as `[0, 6]` with its ends glued; one critical vertex at
/// level 5 and one critical edge on `[4, 5]`.
pub fn circle_domain() -> FundamentalDomain {
    FundamentalDomain::product(&point(), 6, transverse_field(&point(), 6, &["p@5", "p@4:5"]), true).expect("valid")
}

/// The torus as `S^1 x [0, 6]`, transverse except for a critical vertex
/// `0@5` and a critical edge `0@4:5`.
pub fn torus_domain() -> FundamentalDomain {
    FundamentalDomain::product(&circle(), 6, transverse_field(&circle(), 6, &["0@5", "0@4:5"]), true).expect("valid")
}

/// The torus fibred over the circle: transverse everywhere.
pub fn torus_projection_domain() -> FundamentalDomain {
    FundamentalDomain::product(&circle(), 4, transverse_field(&circle(), 4, &[]), true).expect("valid")
}

/// A field on the circle with critical cells `0` and `0-1`.
pub fn circle_field_fixing_0() -> VectorField {
    pairs(&[("1", "1-2"), ("2", "0-2")])
}

/// A field on the circle with critical cells `2` and `0-2`.
pub fn circle_field_moving_0() -> VectorField {
    pairs(&[("0", "0-1"), ("1", "1-2")])
}
