use std::collections::HashMap;

use super::GridError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bus {
    pub id: u32,
    /// Shunt conductance, MW at 1 p.u. voltage.
    pub gs: f64,
    /// Shunt susceptance, MVAr at 1 p.u. voltage.
    pub bs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub from: u32,
    pub to: u32,
    pub r: f64,
    pub x: f64,
    /// Total line charging susceptance.
    pub b: f64,
    /// Off-nominal tap ratio; 0 means a plain line.
    pub ratio: f64,
    /// Phase shift in degrees.
    pub angle: f64,
    pub in_service: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerNetwork {
    buses: Vec<Bus>,
    branches: Vec<Branch>,
    base_mva: f64,
    index: HashMap<u32, usize>,
}

impl PowerNetwork {
    pub fn new(buses: Vec<Bus>, branches: Vec<Branch>, base_mva: f64) -> Result<Self, GridError> {
        let mut index = HashMap::with_capacity(buses.len());
        for (k, bus) in buses.iter().enumerate() {
            if index.insert(bus.id, k).is_some() {
                return Err(GridError::MalformedCase {
                    line: 0,
                    reason: format!("bus {} listed twice", bus.id),
                });
            }
        }
        for (k, br) in branches.iter().enumerate() {
            for bus in [br.from, br.to] {
                if !index.contains_key(&bus) {
                    return Err(GridError::DanglingBranch { branch: k + 1, bus });
                }
            }
        }
        Ok(Self {
            buses,
            branches,
            base_mva,
            index,
        })
    }

    /// Buses in case-file order.
    pub fn buses(&self) -> &[Bus] {
        &self.buses
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn base_mva(&self) -> f64 {
        self.base_mva
    }

    pub fn n_buses(&self) -> usize {
        self.buses.len()
    }

    /// Position of a bus in [`buses`](Self::buses).
    pub fn bus_index(&self, id: u32) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Neighbor lists by bus position over in-service branches, without self loops.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.buses.len()];
        for br in self.branches.iter().filter(|b| b.in_service) {
            let (f, t) = (self.index[&br.from], self.index[&br.to]);
            if f != t {
                adj[f].push(t);
                adj[t].push(f);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Block {
    Bus,
    Branch,
    Other,
}

/// Parses the matrix-block case format (`mpc.baseMVA`, `mpc.bus`, `mpc.branch`).
///
/// Other blocks and trailing columns are skipped. Rows end at `;` or a newline.
pub fn parse_case(text: &str) -> Result<PowerNetwork, GridError> {
    let mut base_mva = None;
    let mut buses = Vec::new();
    let mut branches = Vec::new();
    let mut saw_bus = false;
    let mut saw_branch = false;
    let mut block: Option<(Block, usize)> = None;
    let malformed = |line: usize, reason: String| GridError::MalformedCase { line, reason };

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let mut rest = raw.split('%').next().unwrap_or("").trim();
        if block.is_none() {
            let Some((lhs, rhs)) = rest.split_once('=') else {
                continue;
            };
            let lhs = lhs.trim();
            let rhs = rhs.trim();
            match lhs {
                "mpc.baseMVA" => {
                    let v = rhs.trim_end_matches(';').trim();
                    base_mva = Some(v.parse::<f64>().map_err(|_| {
                        malformed(line, format!("baseMVA value {v:?} is not a number"))
                    })?);
                    continue;
                }
                _ if lhs.starts_with("mpc.") => {
                    let kind = match lhs {
                        "mpc.bus" => {
                            saw_bus = true;
                            Block::Bus
                        }
                        "mpc.branch" => {
                            saw_branch = true;
                            Block::Branch
                        }
                        _ => Block::Other,
                    };
                    if let Some(body) = rhs.strip_prefix('[') {
                        block = Some((kind, line));
                        rest = body;
                    } else if kind != Block::Other {
                        return Err(malformed(line, format!("expected '[' after {lhs}")));
                    } else {
                        continue;
                    }
                }
                _ => continue,
            }
        }
        let Some((kind, _)) = block else { continue };
        let (body, closes) = match rest.find(']') {
            Some(at) => (&rest[..at], true),
            None => (rest, false),
        };
        for row in body.split(';') {
            let fields: Vec<&str> = row
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|f| !f.is_empty())
                .collect();
            if fields.is_empty() || kind == Block::Other {
                continue;
            }
            let values = fields
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|_| malformed(line, "non-numeric matrix entry".into()))?;
            match kind {
                Block::Bus => buses.push(bus_row(&values).map_err(|r| malformed(line, r))?),
                Block::Branch => {
                    branches.push(branch_row(&values).map_err(|r| malformed(line, r))?)
                }
                Block::Other => {}
            }
        }
        if closes {
            block = None;
        }
    }
    let last = text.lines().count();
    if let Some((_, opened)) = block {
        return Err(malformed(opened, "matrix block is never closed".into()));
    }
    if !saw_bus {
        return Err(malformed(last, "no mpc.bus block".into()));
    }
    if !saw_branch {
        return Err(malformed(last, "no mpc.branch block".into()));
    }
    let base_mva = base_mva.ok_or_else(|| malformed(last, "no mpc.baseMVA".into()))?;
    if base_mva <= 0.0 {
        return Err(malformed(last, "baseMVA must be positive".into()));
    }
    PowerNetwork::new(buses, branches, base_mva)
}

fn bus_id(v: f64) -> Result<u32, String> {
    if v.fract() == 0.0 && v >= 1.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(format!("bus id {v} is not a positive integer"))
    }
}

fn bus_row(v: &[f64]) -> Result<Bus, String> {
    if v.len() < 6 {
        return Err(format!("bus row has {} columns, need at least 6", v.len()));
    }
    Ok(Bus {
        id: bus_id(v[0])?,
        gs: v[4],
        bs: v[5],
    })
}

fn branch_row(v: &[f64]) -> Result<Branch, String> {
    if v.len() < 4 {
        return Err(format!(
            "branch row has {} columns, need at least 4",
            v.len()
        ));
    }
    let col = |i: usize, default: f64| v.get(i).copied().unwrap_or(default);
    Ok(Branch {
        from: bus_id(v[0])?,
        to: bus_id(v[1])?,
        r: v[2],
        x: v[3],
        b: col(4, 0.0),
        ratio: col(8, 0.0),
        angle: col(9, 0.0),
        in_service: col(10, 1.0) != 0.0,
    })
}
