use num::{One, Zero};

use super::FlowError;
use crate::model::{LineInstance, ProtocolSpec};
use crate::rational::Q;

/// `Δ[n][s][s']`: share of the `s → s'` flow riding section `n`.
///
/// Built from presentation tables the entries are 0 or 1; passenger-choice
/// rules may split a flow over several sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentTensor {
    pub delta: Vec<Vec<Vec<Q>>>,
}

impl AssignmentTensor {
    pub fn zeros(sections: usize, stations: usize) -> Self {
        Self { delta: vec![vec![vec![Q::zero(); stations]; stations]; sections] }
    }

    pub fn num_sections(&self) -> usize {
        self.delta.len()
    }

    pub fn num_stations(&self) -> usize {
        self.delta.first().map_or(0, Vec::len)
    }

    pub fn at(&self, n: usize, s: usize, t: usize) -> &Q {
        &self.delta[n][s][t]
    }

    pub fn is_binary(&self) -> bool {
        self.delta.iter().flatten().flatten().all(|x| x.is_zero() || x.is_one())
    }
}

/// Station type of every station on the line, from the spec's classification.
pub fn station_types(spec: &ProtocolSpec, line: &LineInstance) -> Result<Vec<usize>, FlowError> {
    let s = line.num_stations();
    match spec.delta.type_indices() {
        Some(types) if types.len() == s => Ok(types),
        _ => Err(FlowError::Unclassified(s)),
    }
}

pub(crate) fn single_train(spec: &ProtocolSpec) -> Result<(), FlowError> {
    match spec.trains.len() {
        1 => Ok(()),
        k => Err(FlowError::MultipleTrainTypes(k)),
    }
}

/// `Δ_nss' = Σ_ij δ_si δ_s'j p_nij` for `s' > s`, else 0.
///
/// Every demanded pair must be presented by exactly one section.
pub fn build_assignment(spec: &ProtocolSpec, line: &LineInstance) -> Result<AssignmentTensor, FlowError> {
    single_train(spec)?;
    let types = station_types(spec, line)?;
    let (sn, n_sec) = (types.len(), spec.num_sections(0));
    let mut out = AssignmentTensor::zeros(n_sec, sn);
    for s in 0..sn {
        for t in s + 1..sn {
            let (i, j) = (types[s], types[t]);
            let presenting: Vec<usize> = (0..n_sec).filter(|&n| spec.p.at(0, n, i, j)).collect();
            if !line.demand[s][t].is_zero() {
                match presenting.len() {
                    0 => return Err(FlowError::UnservedPair { origin: s + 1, destination: t + 1 }),
                    1 => {}
                    k => return Err(FlowError::AmbiguousAssignment { origin: s + 1, destination: t + 1, sections: k }),
                }
            }
            for n in presenting {
                out.delta[n][s][t] = Q::one();
            }
        }
    }
    Ok(out)
}
