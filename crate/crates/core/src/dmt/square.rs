use std::collections::BTreeMap;

use num_rational::Rational64;

use crate::chain::{ChainComplex, ValueFiltration};
use crate::cobordism::SquarePartition;

use super::field::morse_heights;
use super::{level_id, morse_complex, prism_id, CellComplex, DmtError, VectorField};

/// Id of `sigma x a x b` in the double cylinder, where `None` is the
/// interval and `Some(1)` the top level.
pub fn square_cell_id(sigma: &str, a: Option<usize>, b: Option<usize>) -> String {
    let first = match a {
        Some(t) => level_id(sigma, t),
        None => prism_id(sigma, 1),
    };
    match b {
        Some(t) => level_id(&first, t),
        None => prism_id(&first, 1),
    }
}

/// The four layers of the quotient square, in the order `f0, f1, f2, f3`.
const LAYERS: [(Option<usize>, Option<usize>); 4] = [(Some(1), Some(1)), (None, Some(1)), (Some(1), None), (None, None)];

/// `K x I x I`.
pub fn double_cylinder(k: &CellComplex) -> CellComplex {
    k.cylinder().cylinder()
}

/// Morse complex of a two-parameter family over `K`, with its corner
/// partition and value data.
#[derive(Clone, Debug, PartialEq)]
pub struct Square {
    pub complex: ChainComplex<i64>,
    pub partition: SquarePartition,
    /// Value of each critical cell: the height of its `K`-cell for the
    /// field of its layer.
    pub values: ValueFiltration,
    /// Minimal gap between distinct `f0` values.
    pub delta: Rational64,
    /// Largest difference between the values a `K`-cell gets in two layers.
    pub mu: Rational64,
}

impl Square {
    /// `delta - mu`.
    pub fn epsilon(&self) -> Rational64 {
        self.delta - self.mu
    }
}

/// The double cylinder with its free ends (every cell with a coordinate at
/// 0) quotiented out and the field `fields[i]` of `K` on layer `f_i`:
/// `f0 = K x 1 x 1`, `f1 = K x I x 1`, `f2 = K x 1 x I`, `f3 = K x I x I`.
/// Heights are scaled by `scale` so that `delta` dominates the layer
/// differences when the fields are close.
pub fn square_complex(k: &CellComplex, fields: [&VectorField; 4], scale: i64) -> Result<Square, DmtError> {
    let full = double_cylinder(k);
    let ends: Vec<String> = k
        .cells()
        .iter()
        .flat_map(|s| LAYERS_WITH_ZERO.iter().map(|&(a, b)| square_cell_id(&s.id, a, b)))
        .collect();
    let w = full.quotient(&ends)?;
    let mut v = VectorField::empty();
    let mut owner = BTreeMap::new();
    let mut heights = Vec::new();
    for (layer, (&(a, b), field)) in LAYERS.iter().zip(fields).enumerate() {
        let h = morse_heights(k, field)?;
        for s in k.cells() {
            owner.insert(square_cell_id(&s.id, a, b), (layer, s.id.clone()));
        }
        heights.push(k.cells().iter().map(|s| s.id.clone()).zip(h).collect::<BTreeMap<_, _>>());
        for (x, y) in &field.pairs {
            v.push(square_cell_id(x, a, b), square_cell_id(y, a, b));
        }
    }
    let complex = morse_complex(&w, &v)?;
    let mut partition = SquarePartition::default();
    let mut values = Vec::new();
    let mut mu = 0;
    for l in complex.basis().all_labels() {
        let (layer, sigma) = &owner[&l.id];
        let block = match layer {
            0 => &mut partition.f0,
            1 => &mut partition.f1,
            2 => &mut partition.f2,
            _ => &mut partition.f3,
        };
        block.push(l.id.clone());
        values.push((l.id.clone(), Rational64::from_integer(scale * heights[*layer][sigma])));
        for other in &heights {
            mu = mu.max((scale * (other[sigma] - heights[*layer][sigma])).abs());
        }
    }
    let f0 = ValueFiltration::new(values.iter().filter(|(id, _)| partition.f0.contains(id)).cloned());
    let delta = f0.gap().unwrap_or_else(|| Rational64::from_integer(scale));
    Ok(Square { complex, partition, values: ValueFiltration::new(values), delta, mu: Rational64::from_integer(mu) })
}

const LAYERS_WITH_ZERO: [(Option<usize>, Option<usize>); 5] =
    [(Some(0), Some(0)), (Some(0), Some(1)), (Some(0), None), (Some(1), Some(0)), (None, Some(0))];
