use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Rational64;

use super::ChainError;

/// A basis element: a critical point (or cell) with its degree and an
/// optional critical value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub id: String,
    pub degree: i32,
    pub value: Option<Rational64>,
}

impl Label {
    pub fn new(id: impl Into<String>, degree: i32) -> Self {
        Label { id: id.into(), degree, value: None }
    }

    pub fn with_value(id: impl Into<String>, degree: i32, value: Rational64) -> Self {
        Label { id: id.into(), degree, value: Some(value) }
    }
}

/// Ordered labels per degree. Ids are unique across all degrees.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedBasis {
    lo: i32,
    levels: Vec<Vec<Label>>,
    index: HashMap<String, (i32, usize)>,
}

impl GradedBasis {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Groups labels by degree, keeping their relative order.
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Result<Self, ChainError> {
        let mut by_degree: BTreeMap<i32, Vec<Label>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for l in labels {
            if !seen.insert(l.id.clone()) {
                return Err(ChainError::DuplicateLabel(l.id));
            }
            by_degree.entry(l.degree).or_default().push(l);
        }
        Ok(Self::from_levels_map(by_degree))
    }

    fn from_levels_map(by_degree: BTreeMap<i32, Vec<Label>>) -> Self {
        let (Some(&lo), Some(&hi)) = (by_degree.keys().next(), by_degree.keys().next_back()) else {
            return Self::empty();
        };
        let mut levels = vec![Vec::new(); (hi - lo + 1) as usize];
        for (d, ls) in by_degree {
            levels[(d - lo) as usize] = ls;
        }
        let mut b = GradedBasis { lo, levels, index: HashMap::new() };
        b.reindex();
        b
    }

    fn reindex(&mut self) {
        self.index.clear();
        for (k, level) in self.levels.iter().enumerate() {
            for (i, l) in level.iter().enumerate() {
                self.index.insert(l.id.clone(), (self.lo + k as i32, i));
            }
        }
    }

    /// Degrees with possibly nonempty levels, `lo..=hi`.
    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        if self.levels.is_empty() {
            #[allow(clippy::reversed_empty_ranges)]
            return 0..=-1;
        }
        self.lo..=self.lo + self.levels.len() as i32 - 1
    }

    pub fn labels(&self, degree: i32) -> &[Label] {
        let k = degree - self.lo;
        if k < 0 || k as usize >= self.levels.len() {
            return &[];
        }
        &self.levels[k as usize]
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.labels(degree).len()
    }

    pub fn total_dim(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn dims(&self) -> Vec<(i32, usize)> {
        self.degrees().map(|d| (d, self.dim(d))).collect()
    }

    pub fn position(&self, id: &str) -> Option<(i32, usize)> {
        self.index.get(id).copied()
    }

    pub fn all_labels(&self) -> impl Iterator<Item = &Label> {
        self.levels.iter().flatten()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Same ids and degrees, in the same order.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.degrees().all(|d| {
            self.labels(d).iter().map(|l| &l.id).eq(other.labels(d).iter().map(|l| &l.id))
        }) && other.total_dim() == self.total_dim()
    }

    /// Labels of every degree shifted by `by`.
    pub fn shifted(&self, by: i32) -> Self {
        let mut out = self.clone();
        out.lo += by;
        for l in out.levels.iter_mut().flatten() {
            l.degree += by;
        }
        out.reindex();
        out
    }

    /// Same labels with ids rewritten by `f`. Panics if `f` creates a
    /// collision.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Self {
        let mut out = self.clone();
        for l in out.levels.iter_mut().flatten() {
            l.id = f(&l.id);
        }
        out.reindex();
        assert_eq!(out.index.len(), self.index.len(), "relabeling created a collision");
        out
    }

    /// True when values are present and nondecreasing within each degree.
    pub fn is_value_ordered(&self) -> bool {
        self.levels.iter().all(|level| {
            level.iter().all(|l| l.value.is_some())
                && level.windows(2).all(|w| w[0].value <= w[1].value)
        })
    }

    /// Direct sum: per degree, the labels of each part in order. Ids that
    /// collide with an earlier part get `'` appended until unique.
    pub fn direct_sum(parts: &[GradedBasis]) -> (Self, Vec<Vec<String>>) {
        let mut by_degree: BTreeMap<i32, Vec<Label>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        let mut renamed = Vec::new();
        let lo = parts.iter().filter(|p| p.total_dim() > 0).map(|p| *p.degrees().start()).min();
        let hi = parts.iter().filter(|p| p.total_dim() > 0).map(|p| *p.degrees().end()).max();
        let mut ids: Vec<Vec<String>> = vec![Vec::new(); parts.len()];
        if let (Some(lo), Some(hi)) = (lo, hi) {
            for d in lo..=hi {
                for (k, p) in parts.iter().enumerate() {
                    for l in p.labels(d) {
                        let mut l = l.clone();
                        while !seen.insert(l.id.clone()) {
                            l.id.push('\'');
                        }
                        ids[k].push(l.id.clone());
                        by_degree.entry(d).or_default().push(l);
                    }
                }
            }
        }
        renamed.extend(ids);
        (Self::from_levels_map(by_degree), renamed)
    }
}

/// Critical values keyed by label id together with the minimal gap between
/// distinct values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueFiltration {
    values: BTreeMap<String, Rational64>,
    gap: Option<Rational64>,
}

impl ValueFiltration {
    pub fn new(values: impl IntoIterator<Item = (String, Rational64)>) -> Self {
        let values: BTreeMap<String, Rational64> = values.into_iter().collect();
        let distinct: BTreeSet<Rational64> = values.values().copied().collect();
        let gap = distinct
            .iter()
            .zip(distinct.iter().skip(1))
            .map(|(a, b)| b - a)
            .min();
        ValueFiltration { values, gap }
    }

    pub fn from_basis(basis: &GradedBasis) -> Self {
        Self::new(basis.all_labels().filter_map(|l| l.value.map(|v| (l.id.clone(), v))))
    }

    pub fn value(&self, id: &str) -> Option<Rational64> {
        self.values.get(id).copied()
    }

    /// Minimal positive difference between two values; `None` with fewer than
    /// two distinct values.
    pub fn gap(&self) -> Option<Rational64> {
        self.gap
    }

    /// Sorts ids by value, ties broken by id.
    pub fn order<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Vec<String> {
        let mut v: Vec<(Option<Rational64>, String)> =
            ids.into_iter().map(|id| (self.value(id), id.to_string())).collect();
        v.sort();
        v.into_iter().map(|(_, id)| id).collect()
    }
}
