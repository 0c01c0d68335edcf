//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num::{One, Signed, Zero};
use rand::Rng;
use xlt_core::feasibility::{ConstraintId, Indices};
use xlt_core::flow::AssignmentTensor;
use xlt_core::model::{
    AlignmentTable, DisembarkationTable, LineInstance, PresentationTable, ProtocolSpec, SectionDefinition,
    StationClassification, StationTypeCatalog, StopTable, TrainSequence, TrainTypeSpec,
};
use xlt_core::rational::{q, qr};
use xlt_core::sfamily::BarChart;
use xlt_core::{Q, SCHEMA_VERSION};

pub fn seed() -> u64 {
    std::env::var("XLT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_611)
}

// ---------------------------------------------------------------------------
// feasibility

fn bit<R: Rng>(rng: &mut R, p: f64) -> u8 {
    u8::from(rng.gen_bool(p))
}

/// Random small spec with arbitrary (often broken) tables.
pub fn random_spec<R: Rng>(rng: &mut R) -> ProtocolSpec {
    let kk = rng.gen_range(1..=2);
    let c = rng.gen_range(1..=3);
    let labels: Vec<(String, u32)> = (0..c).map(|i| (format!("T{i}"), rng.gen_range(1..=5))).collect();
    let stations = StationTypeCatalog::new(labels);
    let mut trains = Vec::new();
    let (mut u, mut s, mut a, mut v, mut p) = (vec![], vec![], vec![], vec![], vec![]);
    for k in 0..kk {
        let units = rng.gen_range(1..=5);
        let sections = rng.gen_range(1..=units);
        let mut t = TrainTypeSpec::uniform(format!("K{k}"), units, sections, q(1));
        if rng.gen_bool(0.3) {
            t.unit_length = (0..units).map(|_| qr(rng.gen_range(1..=4), 2)).collect();
        }
        trains.push(t);
        u.push(
            (0..units)
                .map(|_| {
                    if rng.gen_bool(0.8) {
                        let n = rng.gen_range(0..sections);
                        (0..sections).map(|x| u8::from(x == n)).collect()
                    } else {
                        (0..sections).map(|_| bit(rng, 0.4)).collect()
                    }
                })
                .collect::<Vec<Vec<u8>>>(),
        );
        s.push((0..c).map(|_| bit(rng, 0.8)).collect::<Vec<u8>>());
        a.push((0..sections).map(|_| (0..c).map(|_| bit(rng, 0.6)).collect()).collect::<Vec<Vec<u8>>>());
        v.push((0..sections).map(|_| (0..c).map(|_| bit(rng, 0.6)).collect()).collect::<Vec<Vec<u8>>>());
        p.push(
            (0..sections)
                .map(|_| (0..c).map(|_| (0..c).map(|_| bit(rng, 0.4)).collect()).collect())
                .collect::<Vec<Vec<Vec<u8>>>>(),
        );
    }
    ProtocolSpec {
        schema_version: SCHEMA_VERSION,
        stations,
        trains,
        delta: StationClassification::default(),
        epsilon: TrainSequence(vec![(0..kk).map(|x| u8::from(x == 0)).collect()]),
        u: SectionDefinition(u),
        s: StopTable(s),
        a: AlignmentTable(a),
        v: DisembarkationTable(v),
        p: PresentationTable(p),
        eol: None,
    }
}

fn gaps(bits: &[u8]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for lo in 0..bits.len() {
        for hi in lo + 1..bits.len() {
            if bits[lo] == 1 && bits[hi] == 1 {
                let filled = bits[lo..=hi].iter().filter(|&&b| b == 1).count();
                if filled != hi - lo + 1 {
                    out.push((lo, hi));
                }
            }
        }
    }
    out
}

/// Violations of the six structural constraints by direct nested loops over
/// the raw tables.
pub fn feasibility_oracle(spec: &ProtocolSpec) -> BTreeSet<(ConstraintId, Indices)> {
    let mut out = BTreeSet::new();
    let c = spec.stations.d.len();
    for (k, train) in spec.trains.iter().enumerate() {
        let u = &spec.u.0[k];
        let a = &spec.a.0[k];
        let v = &spec.v.0[k];
        let p = &spec.p.0[k];
        let s = &spec.s.0[k];
        for n in 0..train.sections {
            let column: Vec<u8> = (0..train.units).map(|m| u[m][n]).collect();
            for (lo, hi) in gaps(&column) {
                out.insert((
                    ConstraintId::E1,
                    Indices { k: Some(k), n: Some(n), lo: Some(lo), hi: Some(hi), ..Default::default() },
                ));
            }
        }
        for i in 0..c {
            let column: Vec<u8> = (0..train.sections).map(|n| a[n][i]).collect();
            for (lo, hi) in gaps(&column) {
                out.insert((
                    ConstraintId::E3,
                    Indices { k: Some(k), i: Some(i), lo: Some(lo), hi: Some(hi), ..Default::default() },
                ));
            }
            let mut len = Q::zero();
            for n in 0..train.sections {
                for m in 0..train.units {
                    if a[n][i] == 1 && u[m][n] == 1 {
                        len += &train.unit_length[m];
                    }
                }
            }
            if len > Q::from_integer(spec.stations.d[i].into()) {
                out.insert((ConstraintId::E4, Indices { k: Some(k), i: Some(i), ..Default::default() }));
            }
            for n in 0..train.sections {
                if a[n][i] > s[i] {
                    out.insert((
                        ConstraintId::E2,
                        Indices { k: Some(k), n: Some(n), i: Some(i), ..Default::default() },
                    ));
                }
                if v[n][i] > a[n][i] {
                    out.insert((
                        ConstraintId::E5,
                        Indices { k: Some(k), n: Some(n), i: Some(i), ..Default::default() },
                    ));
                }
                for j in 0..c {
                    if p[n][i][j] > v[n][i] * v[n][j] {
                        out.insert((
                            ConstraintId::E6,
                            Indices { k: Some(k), n: Some(n), i: Some(i), j: Some(j), ..Default::default() },
                        ));
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// loads

/// Random line with `S` stations and a random, possibly fractional, assignment.
pub fn random_load_instance<R: Rng>(rng: &mut R) -> (LineInstance, AssignmentTensor, Vec<Q>, Vec<Q>) {
    let sn = rng.gen_range(2..=5);
    let n_sec = rng.gen_range(1..=4);
    let mut demand = vec![vec![Q::zero(); sn]; sn];
    for (z, row) in demand.iter_mut().enumerate() {
        for cell in row.iter_mut().skip(z + 1) {
            if rng.gen_bool(0.7) {
                *cell = qr(rng.gen_range(0..=60), rng.gen_range(1..=3));
            }
        }
    }
    let line = LineInstance::new(4, qr(1, rng.gen_range(1..=12)), demand);
    let mut asg = AssignmentTensor::zeros(n_sec, sn);
    for z in 0..sn {
        for t in z + 1..sn {
            if rng.gen_bool(0.6) {
                asg.delta[rng.gen_range(0..n_sec)][z][t] = Q::one();
            } else {
                let w: Vec<i64> = (0..n_sec).map(|_| rng.gen_range(0..=3)).collect();
                let total: i64 = w.iter().sum();
                for n in 0..n_sec {
                    asg.delta[n][z][t] = if total == 0 { Q::zero() } else { qr(w[n], total) };
                }
            }
        }
    }
    let entries: Vec<Q> = (0..sn)
        .map(|z| {
            let a = line.total_demand(z);
            if a.is_zero() {
                a
            } else {
                a * qr(rng.gen_range(0..=4), 4)
            }
        })
        .collect();
    let caps: Vec<Q> = (0..n_sec).map(|_| q(rng.gen_range(1..=20))).collect();
    (line, asg, entries, caps)
}

/// Follows every O-D flow link by link and adds its riders to each section.
pub fn microsimulate(line: &LineInstance, asg: &AssignmentTensor, entries: &[Q]) -> Vec<Vec<Q>> {
    let sn = line.num_stations();
    let n_sec = asg.delta.len();
    let mut load = vec![vec![Q::zero(); sn - 1]; n_sec];
    for z in 0..sn {
        let a_z: Q = line.demand[z].iter().sum();
        if a_z.is_zero() {
            continue;
        }
        for t in z + 1..sn {
            let riders = &entries[z] * &line.demand[z][t] / &a_z * &line.headway;
            for n in 0..n_sec {
                let mine = &riders * &asg.delta[n][z][t];
                for link in z..t {
                    load[n][link] += &mine;
                }
            }
        }
    }
    load
}

// ---------------------------------------------------------------------------
// routing over charts

/// Hop distances between the bars of a single chart over the overlap graph
/// (bars sharing at least one whole unit), by Floyd-Warshall. `None` marks an
/// unreachable pair.
pub fn chart_distances(chart: &BarChart) -> Vec<Vec<Option<u64>>> {
    let c = chart.bars.len();
    let m = i64::from(chart.m);
    let span = |x: usize| {
        let b = &chart.bars[x];
        let lo = (i64::from(b.b) - i64::from(b.d)).max(0);
        let hi = i64::from(b.b).min(m);
        (b.b > 0 && hi > lo).then_some((lo, hi))
    };
    const INF: u64 = u64::MAX / 4;
    let mut dist = vec![vec![INF; c]; c];
    for x in 0..c {
        dist[x][x] = 0;
        for y in 0..c {
            if x == y {
                continue;
            }
            if let (Some((a, b)), Some((p, r))) = (span(x), span(y)) {
                if b.min(r) - a.max(p) >= 1 {
                    dist[x][y] = 1;
                }
            }
        }
    }
    for w in 0..c {
        for x in 0..c {
            for y in 0..c {
                let via = dist[x][w] + dist[w][y];
                if via < dist[x][y] {
                    dist[x][y] = via;
                }
            }
        }
    }
    dist.into_iter().map(|row| row.into_iter().map(|d| (d < INF).then_some(d)).collect()).collect()
}

/// Largest fewest-transfer count between bars of a single chart; `None`
/// when some pair is unreachable.
pub fn chart_worst_transfers(chart: &BarChart) -> Option<u64> {
    let dist = chart_distances(chart);
    let mut worst = 0;
    for row in &dist {
        for d in row {
            worst = worst.max(d.map(|d| d.saturating_sub(1))?);
        }
    }
    Some(worst)
}

/// Fewest classes any single origin bar reaches with at most `t` transfers.
pub fn chart_min_reach(chart: &BarChart, t: u64) -> u64 {
    chart_distances(chart)
        .iter()
        .map(|row| row.iter().filter(|d| d.is_some_and(|d| d.saturating_sub(1) <= t)).count() as u64)
        .min()
        .unwrap_or(0)
}

// ---------------------------------------------------------------------------
// access

/// Monte-Carlo mean extra distance on a cyclic pattern with unit spacing:
/// trip ends uniform along the line, the cheaper end shifted, half the shift
/// counted per trip end.
pub fn access_monte_carlo<R: Rng>(
    rng: &mut R,
    pattern: &[usize],
    connected: impl Fn(usize, usize) -> bool,
    draws: usize,
) -> f64 {
    let p = pattern.len() as f64;
    let np = pattern.len() as i64;
    let ty = |s: i64| pattern[s.rem_euclid(np) as usize];
    // walking distance from x to the nearest station whose type passes `ok`
    let nearest = |x: f64, ok: &dyn Fn(usize) -> bool| -> f64 {
        let base = x.floor() as i64;
        (base - np..=base + np + 1).filter(|&s| ok(ty(s))).map(|s| (x - s as f64).abs()).fold(f64::INFINITY, f64::min)
    };
    let mut total = 0.0;
    for _ in 0..draws {
        let x = rng.gen_range(0.0..p);
        let y = rng.gen_range(0.0..p);
        let (so, sd) = (x.round() as i64, y.round() as i64);
        let (i, j) = (ty(so), ty(sd));
        if connected(i, j) {
            continue;
        }
        let extra_o = nearest(x, &|t| connected(t, j)) - (x - so as f64).abs();
        let extra_d = nearest(y, &|t| connected(i, t)) - (y - sd as f64).abs();
        total += extra_o.min(extra_d) / 2.0;
    }
    total / draws as f64
}

// ---------------------------------------------------------------------------
// linear programs

fn solve_square(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for x in col..n {
                    let d = &f * &m[col][x];
                    m[r][x] -= d;
                }
                let d = &f * &rhs[col];
                rhs[r] -= d;
            }
        }
    }
    Some((0..n).map(|r| &rhs[r] / &m[r][r]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `max c·x` over `{A x <= b}` by enumerating every vertex. The polytope must
/// be bounded and nonempty; returns `None` otherwise.
pub fn lp_by_vertices(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Option<Q> {
    let n = c.len();
    let mut best: Option<Q> = None;
    for rows in combinations(a.len(), n) {
        let m: Vec<Vec<Q>> = rows.iter().map(|&r| a[r].clone()).collect();
        let rhs: Vec<Q> = rows.iter().map(|&r| b[r].clone()).collect();
        let Some(x) = solve_square(m, rhs) else { continue };
        let feasible = a.iter().zip(b).all(|(row, bi)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<Q>() <= *bi);
        if feasible {
            let val: Q = c.iter().zip(&x).map(|(p, q)| p * q).sum();
            if best.as_ref().is_none_or(|b| val > *b) {
                best = Some(val);
            }
        }
    }
    best
}

/// Overcrowding rows from raw presentation tables: `Δ_nzt = Σ_ij δ_zi δ_tj p_nij`.
/// `None` when some demanded pair is not carried by exactly one section.
pub fn metering_rows(spec: &ProtocolSpec, types: &[usize], line: &LineInstance) -> Option<Vec<(usize, Vec<Q>)>> {
    let sn = types.len();
    let n_sec = spec.trains[0].sections;
    let p = &spec.p.0[0];
    let delta = |n: usize, z: usize, t: usize| u8::from(p[n][types[z]][types[t]] == 1);
    for z in 0..sn {
        for t in z + 1..sn {
            let count: u8 = (0..n_sec).map(|n| delta(n, z, t)).sum();
            if !line.demand[z][t].is_zero() && count != 1 {
                return None;
            }
        }
    }
    let mut rows = Vec::new();
    for n in 0..n_sec {
        for s in 0..sn - 1 {
            let mut coef = vec![Q::zero(); sn];
            for (z, cz) in coef.iter_mut().enumerate().take(s + 1) {
                let a_z: Q = line.demand[z].iter().sum();
                if !a_z.is_positive() {
                    continue;
                }
                for t in s + 1..sn {
                    if delta(n, z, t) == 1 {
                        *cz += &line.demand[z][t] / &a_z * &line.headway;
                    }
                }
            }
            rows.push((n, coef));
        }
    }
    Some(rows)
}

/// Exact metering optimum for one classification and sizing by vertex
/// enumeration; `None` when the candidate is infeasible.
pub fn metering_by_vertices(spec: &ProtocolSpec, types: &[usize], sizes: &[u32], line: &LineInstance) -> Option<Q> {
    let rows = metering_rows(spec, types, line)?;
    let sn = types.len();
    let unit_cap = spec.trains[0].unit_capacity[0].clone();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (n, coef) in rows {
        a.push(coef);
        b.push(&unit_cap * Q::from_integer(sizes[n].into()));
    }
    for z in 0..sn {
        let mut up = vec![Q::zero(); sn];
        up[z] = Q::one();
        a.push(up.clone());
        b.push(line.demand[z].iter().sum());
        up[z] = -Q::one();
        a.push(up);
        b.push(-line.min_rates[z].clone());
    }
    lp_by_vertices(&vec![Q::one(); sn], &a, &b)
}
