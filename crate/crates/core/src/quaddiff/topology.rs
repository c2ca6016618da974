//! Shape of a point cloud lying along a few curves: a pruned minimum
//! spanning tree whose endpoints, junctions and corners classify it.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{scaled_spectrum, ARule, EigenOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// Three arcs meeting at one point.
    ThreeLegs,
    /// One smooth arc.
    OneArc,
    /// One arc with a corner.
    Singular,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Topology::ThreeLegs => "three-legs",
            Topology::OneArc => "one-arc",
            Topology::Singular => "singular",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyOptions {
    /// Spanning-tree edges longer than this multiple of the median
    /// nearest-neighbour distance are dropped.
    pub cutoff: f64,
    /// Largest fraction of points allowed outside the main component.
    pub max_discard: f64,
    /// Side branches with at most `max(3, len/spur_divisor)` nodes are pruned.
    pub spur_divisor: usize,
    /// Turning angle, in degrees, above which an arc has a corner.
    pub corner_deg: f64,
    /// Window for turning angles as a fraction of the arc's node count.
    pub corner_window: f64,
}

impl Default for TopologyOptions {
    fn default() -> Self {
        Self { cutoff: 3.0, max_discard: 0.1, spur_divisor: 40, corner_deg: 20.0, corner_window: 0.05 }
    }
}

/// Pruned spanning tree of a point cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skeleton {
    pub points: Vec<Complex64>,
    /// Adjacency lists; pruned nodes have empty lists.
    pub adjacency: Vec<Vec<usize>>,
}

impl Skeleton {
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.points.len()).filter(|&i| !self.adjacency[i].is_empty())
    }

    fn remove_edge(&mut self, i: usize, j: usize) {
        self.adjacency[i].retain(|&k| k != j);
        self.adjacency[j].retain(|&k| k != i);
    }

    /// Nodes from leaf `leaf` up to, not including, the first node of
    /// degree other than two.
    fn branch_from(&self, leaf: usize) -> (Vec<usize>, Option<usize>) {
        let mut chain = vec![leaf];
        let mut prev = usize::MAX;
        let mut cur = leaf;
        loop {
            let next = self.adjacency[cur].iter().copied().find(|&k| k != prev);
            match next {
                None => return (chain, None),
                Some(k) if self.degree(k) == 2 => {
                    chain.push(k);
                    prev = cur;
                    cur = k;
                }
                Some(k) => return (chain, Some(k)),
            }
        }
    }

    /// Path between two nodes of the tree.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.points.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[to] == usize::MAX {
            return Vec::new();
        }
        let mut out = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            out.push(cur);
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub topology: Topology,
    pub endpoints: usize,
    pub junctions: usize,
    /// Largest turning angle in degrees along the endpoint-to-endpoint arc,
    /// when there are exactly two endpoints.
    pub max_turn_deg: Option<f64>,
    pub points_used: usize,
    pub discarded: usize,
    pub skeleton: Skeleton,
}

fn minimum_spanning_tree(points: &[Complex64]) -> Vec<(usize, usize, f64)> {
    let n = points.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, usize::MAX); n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n == 0 {
        return edges;
    }
    best[0].0 = 0.0;
    for _ in 0..n {
        let u = (0..n).filter(|&i| !in_tree[i]).min_by(|&i, &j| best[i].0.total_cmp(&best[j].0)).unwrap();
        in_tree[u] = true;
        if best[u].1 != usize::MAX {
            edges.push((best[u].1, u, best[u].0));
        }
        for v in 0..n {
            let d = (points[u] - points[v]).norm();
            if !in_tree[v] && d < best[v].0 {
                best[v] = (d, u);
            }
        }
    }
    edges
}

fn largest_component(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let mut comp = vec![usize::MAX; n];
    let mut best: Vec<usize> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut members = vec![s];
        comp[s] = s;
        let mut k = 0;
        while k < members.len() {
            for &v in &adjacency[members[k]] {
                if comp[v] == usize::MAX {
                    comp[v] = s;
                    members.push(v);
                }
            }
            k += 1;
        }
        if members.len() > best.len() {
            best = members;
        }
    }
    best
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        f64::NAN
    } else {
        v[v.len() / 2]
    }
}

/// Builds and prunes the skeleton of `points`, returning it with the number
/// of points outside its main component.
pub fn skeleton(points: &[Complex64], opts: &TopologyOptions) -> Result<(Skeleton, usize)> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InvalidInput(format!("{n} points are too few for a skeleton")));
    }
    let edges = minimum_spanning_tree(points);
    let nn: Vec<f64> =
        (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| (points[i] - points[j]).norm()).fold(f64::INFINITY, f64::min)).collect();
    let cut = opts.cutoff * median(nn);
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v, d) in &edges {
        if d <= cut {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    let keep = largest_component(&adjacency);
    let discarded = n - keep.len();
    let mut mask = vec![false; n];
    keep.iter().for_each(|&i| mask[i] = true);
    for (i, adj) in adjacency.iter_mut().enumerate() {
        if !mask[i] {
            adj.clear();
        }
    }
    let mut sk = Skeleton { points: points.to_vec(), adjacency };
    let spur = (keep.len() / opts.spur_divisor.max(1)).max(3);
    loop {
        let mut changed = false;
        let leaves: Vec<usize> = sk.active().filter(|&i| sk.degree(i) == 1).collect();
        for leaf in leaves {
            if sk.degree(leaf) != 1 {
                continue;
            }
            let (chain, end) = sk.branch_from(leaf);
            if let Some(j) = end {
                if chain.len() <= spur && sk.degree(j) >= 3 {
                    let last = *chain.last().unwrap();
                    sk.remove_edge(last, j);
                    for w in chain.windows(2) {
                        sk.remove_edge(w[0], w[1]);
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok((sk, discarded))
}

/// Junction nodes grouped when joined by a path of at most `reach` edges.
fn junction_clusters(sk: &Skeleton, reach: usize) -> usize {
    let junctions: Vec<usize> = sk.active().filter(|&i| sk.degree(i) >= 3).collect();
    let mut label: Vec<usize> = (0..junctions.len()).collect();
    for (a, &i) in junctions.iter().enumerate() {
        for (b, &j) in junctions.iter().enumerate().skip(a + 1) {
            if sk.path(i, j).len() <= reach + 1 {
                let (la, lb) = (label[a], label[b]);
                label.iter_mut().filter(|l| **l == lb).for_each(|l| *l = la);
            }
        }
    }
    label.sort_unstable();
    label.dedup();
    label.len()
}

/// Largest angle in degrees between the chords entering and leaving a node
/// along `path`, each spanning `w` nodes.
fn max_turn(points: &[Complex64], path: &[usize], w: usize) -> f64 {
    let mut best: f64 = 0.0;
    for k in w..path.len().saturating_sub(w) {
        let u = points[path[k]] - points[path[k - w]];
        let v = points[path[k + w]] - points[path[k]];
        best = best.max((v / u).arg().abs().to_degrees());
    }
    best
}

/// Classifies a point cloud by its skeleton.
pub fn classify_cloud(points: &[Complex64], opts: &TopologyOptions) -> Result<TopologyReport> {
    let (sk, discarded) = skeleton(points, opts)?;
    let used = points.len() - discarded;
    let leaves: Vec<usize> = sk.active().filter(|&i| sk.degree(i) == 1).collect();
    let reach = (used / opts.spur_divisor.max(1)).max(3);
    let junctions = junction_clusters(&sk, reach);
    let mut max_turn_deg = None;
    let topology = if discarded as f64 > opts.max_discard * points.len() as f64 {
        None
    } else {
        match (leaves.len(), junctions) {
            (3, 1) => Some(Topology::ThreeLegs),
            (2, 0) => {
                let path = sk.path(leaves[0], leaves[1]);
                let w = ((opts.corner_window * path.len() as f64).round() as usize).max(2);
                let turn = max_turn(&sk.points, &path, w);
                max_turn_deg = Some(turn);
                Some(if turn > opts.corner_deg { Topology::Singular } else { Topology::OneArc })
            }
            _ => None,
        }
    };
    match topology {
        Some(topology) => Ok(TopologyReport {
            topology,
            endpoints: leaves.len(),
            junctions,
            max_turn_deg,
            points_used: used,
            discarded,
            skeleton: sk,
        }),
        None => Err(Error::AmbiguousTopology { endpoints: leaves.len(), junctions }),
    }
}

/// Shape of the limiting support for parameter `a`, read off the scaled
/// spectrum at size `n_probe`.
pub fn support_topology(a: Complex64, n_probe: usize, opts: &TopologyOptions) -> Result<TopologyReport> {
    let s = scaled_spectrum(n_probe, ARule::Scaled(a), &EigenOptions::default())?;
    classify_cloud(&s.points, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn polyline(vertices: &[Complex64], per_segment: usize) -> Vec<Complex64> {
        let mut out = Vec::new();
        for w in vertices.windows(2) {
            for k in 0..per_segment {
                out.push(w[0] + (w[1] - w[0]) * (k as f64 / per_segment as f64));
            }
        }
        out.push(*vertices.last().unwrap());
        out
    }

    fn jitter(points: &mut [Complex64], amp: f64) {
        for (k, z) in points.iter_mut().enumerate() {
            *z += Complex64::from_polar(amp, k as f64 * 2.399);
        }
    }

    #[test]
    fn straight_and_bent_arcs() {
        let o = TopologyOptions::default();
        let mut line = polyline(&[Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)], 200);
        jitter(&mut line, 1e-3);
        assert_eq!(classify_cloud(&line, &o).unwrap().topology, Topology::OneArc);
        let arc: Vec<Complex64> = (0..=200).map(|k| Complex64::from_polar(2.0, PI * k as f64 / 600.0)).collect();
        assert_eq!(classify_cloud(&arc, &o).unwrap().topology, Topology::OneArc);
        let mut bent = polyline(&[Complex64::new(-1.0, 0.5), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], 100);
        jitter(&mut bent, 1e-3);
        assert_eq!(classify_cloud(&bent, &o).unwrap().topology, Topology::Singular);
    }

    #[test]
    fn star_has_three_legs() {
        let o = TopologyOptions::default();
        let mut pts = vec![Complex64::new(0.0, 0.0)];
        for k in 0..3 {
            let d = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0 + 0.3);
            pts.extend((1..=60).map(|j| d * (j as f64 / 60.0)));
        }
        jitter(&mut pts, 1e-3);
        let r = classify_cloud(&pts, &o).unwrap();
        assert_eq!((r.topology, r.endpoints, r.junctions), (Topology::ThreeLegs, 3, 1));
        let conj: Vec<Complex64> = pts.iter().map(|z| z.conj()).collect();
        assert_eq!(classify_cloud(&conj, &o).unwrap().topology, Topology::ThreeLegs);
    }

    #[test]
    fn cross_is_ambiguous() {
        let mut pts = vec![Complex64::new(0.0, 0.0)];
        for k in 0..4 {
            let d = Complex64::from_polar(1.0, PI * k as f64 / 2.0);
            pts.extend((1..=50).map(|j| d * (j as f64 / 50.0)));
        }
        match classify_cloud(&pts, &TopologyOptions::default()) {
            Err(Error::AmbiguousTopology { endpoints: 4, junctions: 1 }) => {}
            r => panic!("{r:?}"),
        }
    }
}
