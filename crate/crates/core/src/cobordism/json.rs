//! JSON blocks for triples and splittings, keyed `"D"`, `"F"`, `"Dprime"`,
//! `"theta"`, `"thetaprime"`, `"psi"` (and `"Fprime"`, `"Fsecond"`,
//! `"thetasecond"`, `"phi"` for splittings).

use serde::{Deserialize, Serialize};

use crate::chain::json::{map_from_doc, map_to_doc, ComplexDoc, DifferentialDoc};
use crate::chain::{ChainComplex, MapRelation};
use crate::matrix::Coefficient;

use super::{CobordismError, MorseTriple, SplittingData};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleDoc {
    #[serde(rename = "D")]
    pub d: ComplexDoc,
    #[serde(rename = "F")]
    pub f: ComplexDoc,
    #[serde(rename = "Dprime")]
    pub dprime: ComplexDoc,
    #[serde(default)]
    pub theta: Vec<DifferentialDoc>,
    #[serde(default)]
    pub thetaprime: Vec<DifferentialDoc>,
    #[serde(default)]
    pub psi: Vec<DifferentialDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingDoc {
    #[serde(rename = "D")]
    pub d: ComplexDoc,
    #[serde(rename = "Fprime")]
    pub fprime: ComplexDoc,
    #[serde(rename = "Fsecond")]
    pub fsecond: ComplexDoc,
    #[serde(default)]
    pub thetaprime: Vec<DifferentialDoc>,
    #[serde(default)]
    pub thetasecond: Vec<DifferentialDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<DifferentialDoc>>,
}

impl<R: Coefficient> MorseTriple<R> {
    pub fn to_doc(&self) -> TripleDoc {
        TripleDoc {
            d: self.d.to_doc(),
            f: self.f.to_doc(),
            dprime: self.dprime.to_doc(),
            theta: map_to_doc(&self.theta),
            thetaprime: map_to_doc(&self.thetaprime),
            psi: map_to_doc(&self.psi),
        }
    }

    pub fn from_doc(ctx: &R::Context, doc: &TripleDoc) -> Result<Self, CobordismError> {
        let d = ChainComplex::from_doc(ctx, &doc.d)?;
        let f = ChainComplex::from_doc(ctx, &doc.f)?;
        let dprime = ChainComplex::from_doc(ctx, &doc.dprime)?;
        let theta = map_from_doc(&f, &d, -1, MapRelation::Anticommute, &doc.theta)?;
        let thetaprime = map_from_doc(&dprime, &f, 0, MapRelation::Commute, &doc.thetaprime)?;
        let psi = map_from_doc(&dprime, &d, 0, MapRelation::Commute, &doc.psi)?;
        MorseTriple::new(d, f, dprime, theta, thetaprime, psi)
    }
}

impl<R: Coefficient> SplittingData<R> {
    pub fn to_doc(&self) -> SplittingDoc {
        SplittingDoc {
            d: self.d.to_doc(),
            fprime: self.fprime.to_doc(),
            fsecond: self.fsecond.to_doc(),
            thetaprime: map_to_doc(&self.thetaprime),
            thetasecond: map_to_doc(&self.thetasecond),
            phi: self.phi.as_ref().map(map_to_doc),
        }
    }

    pub fn from_doc(ctx: &R::Context, doc: &SplittingDoc) -> Result<Self, CobordismError> {
        let d = ChainComplex::from_doc(ctx, &doc.d)?;
        let fprime = ChainComplex::from_doc(ctx, &doc.fprime)?;
        let fsecond = ChainComplex::from_doc(ctx, &doc.fsecond)?;
        let thetaprime = map_from_doc(&d, &fprime, 0, MapRelation::Commute, &doc.thetaprime)?;
        let thetasecond = map_from_doc(&fsecond, &d, -1, MapRelation::Anticommute, &doc.thetasecond)?;
        let phi = doc
            .phi
            .as_ref()
            .map(|p| map_from_doc(&fsecond, &fprime, -1, MapRelation::Anticommute, p))
            .transpose()?;
        SplittingData::new(d, fprime, fsecond, thetaprime, thetasecond, phi)
    }
}
