//! Minimum-transfer routing over alignment charts.
//!
//! Two station types are joined by a riding edge on train type `k` when their
//! bars on chart `k` share at least one whole unit. Changing trains at a
//! station of any type is allowed, across train types too, and every boarding
//! after the first counts as one transfer.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::model::ProtocolSpec;
use crate::sfamily::MultiTrainChart;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RoutingError {
    #[error("no route from {origin} to {destination}")]
    Unreachable { origin: String, destination: String },
    #[error("unknown station type `{0}`")]
    UnknownType(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityGraph {
    pub types: Vec<String>,
    pub trains: Vec<String>,
    /// Riding edges `(i, j)` with `i < j`, mapped to the train types serving them.
    pub edges: BTreeMap<(usize, usize), Vec<usize>>,
    /// Station types served by two or more train types, where passengers can
    /// change train type.
    pub connectors: BTreeMap<usize, Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Leg {
    pub train: usize,
    pub board: usize,
    pub alight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoutePlan {
    pub origin: usize,
    pub destination: usize,
    pub legs: Vec<Leg>,
    pub transfers: usize,
}

fn from_membership(types: Vec<String>, trains: Vec<String>, served: &[Vec<BTreeSet<usize>>]) -> ConnectivityGraph {
    // served[k] = label sets of the units (or sections) of train type k
    let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut stops: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, sets) in served.iter().enumerate() {
        let mut pairs = BTreeSet::new();
        let mut visited = BTreeSet::new();
        for set in sets {
            visited.extend(set.iter().copied());
            for &i in set {
                for &j in set.range(i + 1..) {
                    pairs.insert((i, j));
                }
            }
        }
        for p in pairs {
            edges.entry(p).or_default().push(k);
        }
        for i in visited {
            stops.entry(i).or_default().push(k);
        }
    }
    let connectors = stops.into_iter().filter(|(_, ks)| ks.len() > 1).collect();
    ConnectivityGraph { types, trains, edges, connectors }
}

/// Graph of a (multi-)chart.
pub fn build_graph(multi: &MultiTrainChart) -> ConnectivityGraph {
    let served: Vec<Vec<BTreeSet<usize>>> = multi
        .trains
        .iter()
        .enumerate()
        .map(|(k, t)| {
            (0..t.chart.m)
                .map(|m| {
                    (0..multi.types.len())
                        .filter(|&i| multi.bar_of(k, i).is_some_and(|b| t.chart.unit_aligned(m, b)))
                        .collect()
                })
                .collect()
        })
        .collect();
    from_membership(multi.types.clone(), multi.trains.iter().map(|t| t.label.clone()).collect(), &served)
}

/// Graph of a protocol: types joined when one section aligns at both.
pub fn build_graph_from_spec(spec: &ProtocolSpec) -> ConnectivityGraph {
    let served: Vec<Vec<BTreeSet<usize>>> =
        (0..spec.trains.len()).map(|k| (0..spec.num_sections(k)).map(|n| spec.label_set(k, n)).collect()).collect();
    from_membership(spec.stations.labels.clone(), spec.trains.iter().map(|t| t.label.clone()).collect(), &served)
}

impl ConnectivityGraph {
    pub fn type_index(&self, label: &str) -> Result<usize, RoutingError> {
        self.types.iter().position(|t| t == label).ok_or_else(|| RoutingError::UnknownType(label.to_string()))
    }

    pub fn connected(&self, i: usize, j: usize) -> bool {
        i == j || self.edges.contains_key(&(i.min(j), i.max(j)))
    }

    fn trains_between(&self, i: usize, j: usize) -> &[usize] {
        self.edges.get(&(i.min(j), i.max(j))).map_or(&[], Vec::as_slice)
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.types.len()).filter(move |&j| j != i && self.connected(i, j))
    }

    /// Number of legs from `origin` to every type, by breadth-first search.
    fn legs_from(&self, origin: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.types.len()];
        dist[origin] = Some(0);
        let mut queue = VecDeque::from([origin]);
        while let Some(i) = queue.pop_front() {
            let di = dist[i].unwrap_or(0);
            for j in self.neighbours(i) {
                if dist[j].is_none() {
                    dist[j] = Some(di + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    fn unreachable(&self, o: usize, d: usize) -> RoutingError {
        RoutingError::Unreachable { origin: self.types[o].clone(), destination: self.types[d].clone() }
    }

    /// Fewest transfers from `origin` to `destination`; 0 for the same type.
    pub fn min_transfers(&self, origin: usize, destination: usize) -> Result<usize, RoutingError> {
        match self.legs_from(origin)[destination] {
            Some(0) => Ok(0),
            Some(legs) => Ok(legs - 1),
            None => Err(self.unreachable(origin, destination)),
        }
    }

    /// Transfer matrix; `None` where no route exists.
    pub fn transfer_matrix(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.types.len())
            .map(|o| self.legs_from(o).into_iter().map(|l| l.map(|l| l.saturating_sub(1))).collect())
            .collect()
    }

    /// All fewest-transfer plans, each leg on one concrete train type.
    pub fn route_plans(&self, origin: usize, destination: usize) -> Result<Vec<RoutePlan>, RoutingError> {
        if origin == destination {
            return Ok(vec![RoutePlan { origin, destination, legs: vec![], transfers: 0 }]);
        }
        let to_dest = self.legs_from(destination);
        let Some(total) = to_dest[origin] else {
            return Err(self.unreachable(origin, destination));
        };
        let mut plans = Vec::new();
        let mut stack: Vec<(usize, Vec<Leg>)> = vec![(origin, Vec::new())];
        while let Some((at, legs)) = stack.pop() {
            if at == destination {
                plans.push(RoutePlan { origin, destination, transfers: legs.len() - 1, legs });
                continue;
            }
            let remaining = total - legs.len();
            for next in self.neighbours(at) {
                if to_dest[next] != Some(remaining - 1) {
                    continue;
                }
                for &k in self.trains_between(at, next) {
                    let mut l = legs.clone();
                    l.push(Leg { train: k, board: at, alight: next });
                    stack.push((next, l));
                }
            }
        }
        plans.sort();
        Ok(plans)
    }

    /// Largest minimum transfer count over ordered type pairs, with the
    /// smallest witness by `(origin, destination)` labels.
    pub fn worst_pair(&self) -> Result<((usize, usize), usize), RoutingError> {
        let matrix = self.transfer_matrix();
        let mut order: Vec<usize> = (0..self.types.len()).collect();
        order.sort_by(|&a, &b| self.types[a].cmp(&self.types[b]));
        let mut best: Option<((usize, usize), usize)> = None;
        for &o in &order {
            for &d in &order {
                let t = matrix[o][d].ok_or_else(|| self.unreachable(o, d))?;
                if best.is_none_or(|(_, bt)| t > bt) {
                    best = Some(((o, d), t));
                }
            }
        }
        best.ok_or(RoutingError::UnknownType("(empty universe)".into()))
    }
}
