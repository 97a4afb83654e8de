//! JSON file formats. All node indices in files are one-based.
//!
//! Network: `{"dim": d, "nodes": [[x, ...], ...], "cost": {"terms": [{"lambda": 1.0, "a": 2.0}], "normalized": true}}`
//!
//! Plan: `{"source": k, "Q": 1.0, "parts": [{"weight": q, "edges": [[i, j], ...]}]}`,
//! optionally with a top-level `"antenna"` and a per-part `"schedule"` giving
//! the transmission order of the part's edges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BroadcastPlan, CostModel, CostTerm, Edge, EnergyReport, Network, Part};
use crate::wma::AntennaModel;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostFile {
    pub terms: Vec<CostTerm>,
    #[serde(default)]
    pub normalized: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkFile {
    pub dim: usize,
    pub nodes: Vec<Vec<f64>>,
    pub cost: CostFile,
}

impl NetworkFile {
    pub fn from_network(net: &Network) -> Self {
        Self {
            dim: net.dim(),
            nodes: net.nodes().to_vec(),
            cost: CostFile {
                terms: net.cost_model().terms().to_vec(),
                normalized: net.cost_model().is_normalized(),
            },
        }
    }

    pub fn into_network(self) -> Result<Network> {
        let model = CostModel::new(self.cost.terms, self.cost.normalized)?;
        Network::new(self.dim, self.nodes, model)
    }
}

pub fn network_from_json(text: &str) -> Result<Network> {
    serde_json::from_str::<NetworkFile>(text)?.into_network()
}

pub fn network_to_json(net: &Network) -> String {
    to_pretty(&NetworkFile::from_network(net))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartFile {
    pub weight: f64,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanFile {
    pub source: usize,
    #[serde(rename = "Q")]
    pub demand: f64,
    pub parts: Vec<PartFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antenna: Option<AntennaModel>,
}

/// A plan read from or written to disk, with its optional antenna model.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanDocument {
    pub plan: BroadcastPlan,
    pub antenna: Option<AntennaModel>,
}

impl PlanDocument {
    pub fn new(plan: BroadcastPlan) -> Self {
        Self {
            plan,
            antenna: None,
        }
    }

    pub fn with_antenna(plan: BroadcastPlan, antenna: AntennaModel) -> Self {
        Self {
            plan,
            antenna: Some(antenna),
        }
    }

    pub fn to_file(&self) -> PlanFile {
        let to_pairs = |edges: &[Edge]| {
            edges
                .iter()
                .map(|&(i, j)| [i + 1, j + 1])
                .collect::<Vec<_>>()
        };
        PlanFile {
            source: self.plan.source() + 1,
            demand: self.plan.demand(),
            parts: self
                .plan
                .parts()
                .iter()
                .map(|p| PartFile {
                    weight: p.weight,
                    edges: to_pairs(&p.edges),
                    schedule: self.antenna.map(|_| to_pairs(&p.edges)),
                })
                .collect(),
            antenna: self.antenna,
        }
    }

    pub fn from_file(file: PlanFile) -> Result<Self> {
        let source = one_based(file.source, "source")?;
        let mut parts = Vec::with_capacity(file.parts.len());
        for (r, p) in file.parts.into_iter().enumerate() {
            let edges = convert_edges(&p.edges)?;
            let edges = match p.schedule {
                Some(schedule) => {
                    let schedule = convert_edges(&schedule)?;
                    let (mut a, mut b) = (edges.clone(), schedule.clone());
                    a.sort_unstable();
                    b.sort_unstable();
                    if a != b {
                        return Err(Error::InvalidPlan(format!(
                            "part {}: schedule is not a permutation of its edges",
                            r + 1
                        )));
                    }
                    schedule
                }
                None => edges,
            };
            parts.push(Part::new(edges, p.weight));
        }
        Ok(Self {
            plan: BroadcastPlan::new(source, file.demand, parts)?,
            antenna: file.antenna,
        })
    }
}

fn one_based(index: usize, what: &str) -> Result<usize> {
    index
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidPlan(format!("{what} index must be at least 1")))
}

fn convert_edges(pairs: &[[usize; 2]]) -> Result<Vec<Edge>> {
    pairs
        .iter()
        .map(|&[i, j]| Ok((one_based(i, "edge")?, one_based(j, "edge")?)))
        .collect()
}

pub fn plan_from_json(text: &str) -> Result<PlanDocument> {
    PlanDocument::from_file(serde_json::from_str(text)?)
}

pub fn plan_to_json(doc: &PlanDocument) -> String {
    to_pretty(&doc.to_file())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub per_node: Vec<f64>,
    pub objective: f64,
    pub bottleneck: usize,
    pub cycles: Option<u64>,
}

impl From<&EnergyReport> for ReportFile {
    fn from(r: &EnergyReport) -> Self {
        Self {
            per_node: r.per_node.clone(),
            objective: r.objective,
            bottleneck: r.bottleneck + 1,
            cycles: r.cycles,
        }
    }
}

pub fn report_to_json(report: &EnergyReport) -> String {
    to_pretty(&ReportFile::from(report))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
