//! Gamma as JSON blocks `"F"`, `"D"`, `"theta"`, `"thetaprime"`, `"psi"`,
//! `"twist"`.

use serde::{Deserialize, Serialize};

use crate::chain::json::{map_from_doc, map_to_doc, ComplexDoc, DifferentialDoc};
use crate::chain::{ChainComplex, MapRelation};
use crate::matrix::NovikovContext;
use crate::rings::RingContext;

use super::{AlgebraicCobordism, AssemblyError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaDoc {
    #[serde(rename = "F")]
    pub f: ComplexDoc,
    #[serde(rename = "D")]
    pub d: ComplexDoc,
    #[serde(default)]
    pub theta: Vec<DifferentialDoc>,
    #[serde(default)]
    pub thetaprime: Vec<DifferentialDoc>,
    #[serde(default)]
    pub psi: Vec<DifferentialDoc>,
    pub twist: RingContext,
}

impl AlgebraicCobordism {
    pub fn to_doc(&self) -> GammaDoc {
        GammaDoc {
            f: self.f.to_doc(),
            d: self.d.to_doc(),
            theta: map_to_doc(&self.theta),
            thetaprime: map_to_doc(&self.thetaprime),
            psi: map_to_doc(&self.psi),
            twist: (**self.ring()).clone(),
        }
    }

    pub fn from_doc(doc: &GammaDoc) -> Result<Self, AssemblyError> {
        let ctx = NovikovContext::new(std::sync::Arc::new(doc.twist.clone()), None);
        let f = ChainComplex::from_doc(&ctx, &doc.f)?;
        let d = ChainComplex::from_doc(&ctx, &doc.d)?;
        let theta = map_from_doc(&f, &d, -1, MapRelation::Anticommute, &doc.theta)?;
        let thetaprime = map_from_doc(&d, &f, 0, MapRelation::Commute, &doc.thetaprime)?;
        let psi = map_from_doc(&d, &d, 0, MapRelation::Commute, &doc.psi)?;
        AlgebraicCobordism::new(f, d, theta, thetaprime, psi)
    }
}
