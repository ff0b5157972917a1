use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::PowerNetwork;

/// Optional caps on the placement search; hitting one returns the best cover found.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlacementLimits {
    pub node_cap: Option<u64>,
    pub time_cap: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    /// PMU buses, ascending.
    pub buses: Vec<u32>,
    /// The cover size is proven minimum.
    pub optimal: bool,
    pub nodes: u64,
}

impl Placement {
    pub fn n(&self) -> usize {
        self.buses.len()
    }

    /// Every bus hosts a PMU or neighbors one.
    pub fn covers(&self, net: &PowerNetwork) -> bool {
        let adj = net.adjacency();
        let mut seen = vec![false; net.n_buses()];
        for &b in &self.buses {
            let Some(i) = net.bus_index(b) else {
                return false;
            };
            seen[i] = true;
            for &j in &adj[i] {
                seen[j] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementReport {
    pub case: String,
    pub n: usize,
    pub buses: Vec<u32>,
    pub optimal: bool,
}

impl PlacementReport {
    pub fn new(case: impl Into<String>, p: &Placement) -> Self {
        Self {
            case: case.into(),
            n: p.n(),
            buses: p.buses.clone(),
            optimal: p.optimal,
        }
    }
}

pub fn place_pmus(net: &PowerNetwork) -> Placement {
    place_pmus_with(net, PlacementLimits::default())
}

/// Minimum dominating set of the bus graph.
///
/// The minimum size is found first by branch and bound; the reported set is then the
/// lexicographically smallest cover of that size, fixed bus by bus in ascending id.
pub fn place_pmus_with(net: &PowerNetwork, limits: PlacementLimits) -> Placement {
    let mut ids: Vec<u32> = net.buses().iter().map(|b| b.id).collect();
    ids.sort_unstable();
    let adj = net.adjacency();
    let closed: Vec<Bits> = ids
        .iter()
        .map(|&id| {
            let i = net.bus_index(id).expect("own id");
            let mut set = Bits::new(ids.len());
            set.insert(rank_of(&ids, net.buses()[i].id));
            for &j in &adj[i] {
                set.insert(rank_of(&ids, net.buses()[j].id));
            }
            set
        })
        .collect();

    let mut search = Cover::new(closed, limits);
    let mut best = search.greedy();
    let mut optimal = true;
    let forbidden = Bits::new(ids.len());

    // Shrink the budget until no cover fits.
    while !best.is_empty() {
        match search.find(&[], &forbidden, best.len() - 1) {
            Ok(Some(found)) => best = found,
            Ok(None) => break,
            Err(Stop) => {
                optimal = false;
                break;
            }
        }
    }

    if optimal {
        // best is the witness; fix buses in ascending order while a cover of this size remains.
        let k = best.len();
        let mut fixed: Vec<usize> = Vec::new();
        let mut forbidden = Bits::new(ids.len());
        let mut witness = best.clone();
        witness.sort_unstable();
        for v in 0..ids.len() {
            if fixed.len() == k {
                break;
            }
            if witness.contains(&v) {
                fixed.push(v);
                continue;
            }
            fixed.push(v);
            match search.find(&fixed, &forbidden, k) {
                Ok(Some(mut found)) => {
                    found.sort_unstable();
                    witness = found;
                }
                Ok(None) => {
                    fixed.pop();
                    forbidden.insert(v);
                }
                Err(Stop) => {
                    fixed.pop();
                    break;
                }
            }
        }
        best = witness;
    }

    let mut buses: Vec<u32> = best.into_iter().map(|v| ids[v]).collect();
    buses.sort_unstable();
    Placement {
        buses,
        optimal,
        nodes: search.nodes,
    }
}

fn rank_of(sorted: &[u32], id: u32) -> usize {
    sorted.binary_search(&id).expect("bus id present")
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn count_minus(&self, minus: &Bits) -> u32 {
        self.0
            .iter()
            .zip(&minus.0)
            .map(|(a, b)| (a & !b).count_ones())
            .sum()
    }

    fn intersects(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn iter_minus<'a>(&'a self, minus: &'a Bits) -> impl Iterator<Item = usize> + 'a {
        self.0
            .iter()
            .zip(&minus.0)
            .enumerate()
            .flat_map(|(w, (a, b))| {
                let mut word = a & !b;
                std::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + bit)
                })
            })
    }
}

struct Stop;

struct Cover {
    closed: Vec<Bits>,
    n: usize,
    limits: PlacementLimits,
    started: Instant,
    nodes: u64,
}

impl Cover {
    fn new(closed: Vec<Bits>, limits: PlacementLimits) -> Self {
        Self {
            n: closed.len(),
            closed,
            limits,
            started: Instant::now(),
            nodes: 0,
        }
    }

    fn all(&self) -> Bits {
        let mut b = Bits::new(self.n);
        for i in 0..self.n {
            b.insert(i);
        }
        b
    }

    /// Most newly covered buses first, ties to the lower id.
    fn greedy(&self) -> Vec<usize> {
        let mut covered = Bits::new(self.n);
        let mut chosen = Vec::new();
        while covered.count_minus(&Bits::new(self.n)) < self.n as u32 {
            let v = (0..self.n)
                .max_by_key(|&v| (self.closed[v].count_minus(&covered), std::cmp::Reverse(v)))
                .expect("nonempty");
            covered.union_with(&self.closed[v]);
            chosen.push(v);
        }
        chosen
    }

    /// A cover of at most `budget` buses containing `fixed` and avoiding `forbidden`.
    fn find(
        &mut self,
        fixed: &[usize],
        forbidden: &Bits,
        budget: usize,
    ) -> Result<Option<Vec<usize>>, Stop> {
        if fixed.iter().any(|&v| forbidden.contains(v)) || fixed.len() > budget {
            return Ok(None);
        }
        let mut covered = Bits::new(self.n);
        for &v in fixed {
            covered.union_with(&self.closed[v]);
        }
        let mut chosen = fixed.to_vec();
        let mut forbidden = forbidden.clone();
        let all = self.all();
        if self.dfs(&all, &covered, &mut chosen, &mut forbidden, budget)? {
            Ok(Some(chosen))
        } else {
            Ok(None)
        }
    }

    fn dfs(
        &mut self,
        all: &Bits,
        covered: &Bits,
        chosen: &mut Vec<usize>,
        forbidden: &mut Bits,
        budget: usize,
    ) -> Result<bool, Stop> {
        self.nodes += 1;
        if self.limits.node_cap.is_some_and(|cap| self.nodes > cap) {
            return Err(Stop);
        }
        if self.nodes % 1024 == 0
            && self
                .limits
                .time_cap
                .is_some_and(|cap| self.started.elapsed() >= cap)
        {
            return Err(Stop);
        }

        // Undominated buses with their allowed candidate counts.
        let mut open: Vec<(u32, usize)> = Vec::new();
        for u in all.iter_minus(covered) {
            let cands = self.closed[u].count_minus(forbidden);
            if cands == 0 {
                return Ok(false);
            }
            open.push((cands, u));
        }
        if open.is_empty() {
            return Ok(true);
        }
        let room = budget - chosen.len();
        if room == 0 {
            return Ok(false);
        }
        open.sort_unstable();

        // Buses with disjoint candidate sets each need their own PMU.
        let mut used = Bits::new(self.n);
        let mut packing = 0;
        for &(_, u) in &open {
            let mut cands = self.closed[u].clone();
            for (c, f) in cands.0.iter_mut().zip(&forbidden.0) {
                *c &= !f;
            }
            if !cands.intersects(&used) {
                used.union_with(&cands);
                packing += 1;
                if packing > room {
                    return Ok(false);
                }
            }
        }
        let best_gain = (0..self.n)
            .filter(|&v| !forbidden.contains(v))
            .map(|v| self.closed[v].count_minus(covered) as usize)
            .max()
            .unwrap_or(0);
        if open.len() > room * best_gain {
            return Ok(false);
        }

        let u = open[0].1;
        let mut cands: Vec<usize> = self.closed[u].iter_minus(forbidden).collect();
        cands.sort_by_key(|&v| (std::cmp::Reverse(self.closed[v].count_minus(covered)), v));
        let mut banned = Vec::new();
        let mut found = false;
        for v in cands {
            let mut next = covered.clone();
            next.union_with(&self.closed[v]);
            chosen.push(v);
            let r = self.dfs(all, &next, chosen, forbidden, budget);
            match r {
                Ok(true) => {
                    found = true;
                    break;
                }
                Ok(false) => {
                    chosen.pop();
                }
                Err(e) => {
                    chosen.pop();
                    for b in banned {
                        forbidden.remove(b);
                    }
                    return Err(e);
                }
            }
            // Later siblings need not consider v again.
            forbidden.insert(v);
            banned.push(v);
        }
        for b in banned {
            forbidden.remove(b);
        }
        Ok(found)
    }
}
