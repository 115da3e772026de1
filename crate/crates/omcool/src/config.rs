//! JSON system documents.
//!
//! Modes carry names and edges refer to them, so documents read like the
//! schematics they describe:
//!
//! ```json
//! {
//!   "parameter_mode": "effective",
//!   "topology": "n_type",
//!   "cavities": [{"name": "a", "detuning": 1.0, "decay": 0.1}],
//!   "mechanicals": [{"name": "b1", "frequency": 1.0, "damping": 1e-5, "thermal_occupation": 1000}],
//!   "edges": [{"kind": "optomechanical", "from": "a", "to": "b1", "strength": 0.05}]
//! }
//! ```
//!
//! Strengths and drives are a number or a `[re, im]` pair.

use std::collections::HashMap;
use std::path::Path;

use omcool_core::model::{
    validate_config, CavityMode, ConfigError, CouplingEdge, CouplingKind, MechanicalMode, ModeRef,
    ParameterMode, SystemConfig, Topology,
};
use omcool_core::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("edge {edge}: unknown mode name `{name}`")]
    UnknownMode { edge: usize, name: String },
    #[error("mode name `{0}` is used more than once")]
    DuplicateName(String),
    #[error("invalid configuration: {0}")]
    Invalid(#[from] ConfigError),
}

impl ConfigFileError {
    /// True for syntax and schema errors, false for semantic ones.
    pub fn is_parse(&self) -> bool {
        matches!(self, ConfigFileError::Parse(_) | ConfigFileError::Io { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex([f64; 2]),
}

impl Value {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Value::Real(x) => Complex64::new(x, 0.0),
            Value::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.im == 0.0 {
            Value::Real(z.re)
        } else {
            Value::Complex([z.re, z.im])
        }
    }

    fn is_zero(&self) -> bool {
        self.to_complex() == Complex64::new(0.0, 0.0)
    }
}

impl Default for Value {
    fn default() -> Self {
        Value::Real(0.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeDoc {
    #[default]
    Effective,
    Physical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyDoc {
    NType,
    Network4,
    Chain,
    Generic,
}

impl From<TopologyDoc> for Topology {
    fn from(t: TopologyDoc) -> Self {
        match t {
            TopologyDoc::NType => Topology::NType,
            TopologyDoc::Network4 => Topology::Network4,
            TopologyDoc::Chain => Topology::Chain,
            TopologyDoc::Generic => Topology::Generic,
        }
    }
}

impl From<Topology> for TopologyDoc {
    fn from(t: Topology) -> Self {
        match t {
            Topology::NType => TopologyDoc::NType,
            Topology::Network4 => TopologyDoc::Network4,
            Topology::Chain => TopologyDoc::Chain,
            Topology::Generic => TopologyDoc::Generic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindDoc {
    Optomechanical,
    PhotonHop,
    PhononHop,
}

impl From<KindDoc> for CouplingKind {
    fn from(k: KindDoc) -> Self {
        match k {
            KindDoc::Optomechanical => CouplingKind::Optomechanical,
            KindDoc::PhotonHop => CouplingKind::PhotonHop,
            KindDoc::PhononHop => CouplingKind::PhononHop,
        }
    }
}

impl From<CouplingKind> for KindDoc {
    fn from(k: CouplingKind) -> Self {
        match k {
            CouplingKind::Optomechanical => KindDoc::Optomechanical,
            CouplingKind::PhotonHop => KindDoc::PhotonHop,
            CouplingKind::PhononHop => KindDoc::PhononHop,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityDoc {
    pub name: String,
    pub detuning: f64,
    pub decay: f64,
    #[serde(default, skip_serializing_if = "Value::is_zero")]
    pub drive: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanicalDoc {
    pub name: String,
    pub frequency: f64,
    pub damping: f64,
    pub thermal_occupation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub kind: KindDoc,
    pub from: String,
    pub to: String,
    pub strength: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default)]
    pub parameter_mode: ModeDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologyDoc>,
    pub cavities: Vec<CavityDoc>,
    pub mechanicals: Vec<MechanicalDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

impl Document {
    pub fn from_json(text: &str) -> Result<Document, ConfigFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn load(path: &Path) -> Result<Document, ConfigFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Document::from_json(&text)
    }

    fn names(&self) -> Result<HashMap<&str, ModeRef>, ConfigFileError> {
        let mut map = HashMap::new();
        let cavs = self
            .cavities
            .iter()
            .enumerate()
            .map(|(i, c)| (c.name.as_str(), ModeRef::Cavity(i)));
        let mechs = self
            .mechanicals
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.as_str(), ModeRef::Mechanical(i)));
        for (name, r) in cavs.chain(mechs) {
            if map.insert(name, r).is_some() {
                return Err(ConfigFileError::DuplicateName(name.to_string()));
            }
        }
        Ok(map)
    }

    pub fn mode_ref(&self, name: &str) -> Option<ModeRef> {
        self.names().ok()?.get(name).copied()
    }

    /// Resolves names and validates the resulting configuration.
    pub fn to_config(&self) -> Result<SystemConfig, ConfigFileError> {
        let names = self.names()?;
        let cavities = self
            .cavities
            .iter()
            .map(|c| CavityMode::driven(c.detuning, c.decay, c.drive.to_complex()))
            .collect();
        let mechanicals = self
            .mechanicals
            .iter()
            .map(|m| MechanicalMode::new(m.frequency, m.damping, m.thermal_occupation))
            .collect();
        let mut config = SystemConfig::new(cavities, mechanicals);
        config.parameter_mode = match self.parameter_mode {
            ModeDoc::Effective => ParameterMode::Effective,
            ModeDoc::Physical => ParameterMode::Physical,
        };
        config.topology = self.topology.map(Topology::from);
        for (i, e) in self.edges.iter().enumerate() {
            let lookup = |name: &str| {
                names
                    .get(name)
                    .copied()
                    .ok_or_else(|| ConfigFileError::UnknownMode {
                        edge: i,
                        name: name.to_string(),
                    })
            };
            config.edges.push(CouplingEdge {
                kind: e.kind.into(),
                from: lookup(&e.from)?,
                to: lookup(&e.to)?,
                strength: e.strength.to_complex(),
            });
        }
        Ok(validate_config(config)?)
    }

    /// Document for an in-memory configuration; modes are named c1, c2, …
    /// and m1, m2, ….
    pub fn from_config(config: &SystemConfig) -> Document {
        let cname = |i: usize| format!("c{}", i + 1);
        let mname = |i: usize| format!("m{}", i + 1);
        let name = |r: ModeRef| match r {
            ModeRef::Cavity(i) => cname(i),
            ModeRef::Mechanical(i) => mname(i),
        };
        Document {
            parameter_mode: match config.parameter_mode {
                ParameterMode::Effective => ModeDoc::Effective,
                ParameterMode::Physical => ModeDoc::Physical,
            },
            topology: config.topology.map(TopologyDoc::from),
            cavities: config
                .cavities
                .iter()
                .enumerate()
                .map(|(i, c)| CavityDoc {
                    name: cname(i),
                    detuning: c.detuning,
                    decay: c.decay,
                    drive: Value::from_complex(c.drive),
                })
                .collect(),
            mechanicals: config
                .mechanicals
                .iter()
                .enumerate()
                .map(|(i, m)| MechanicalDoc {
                    name: mname(i),
                    frequency: m.frequency,
                    damping: m.damping,
                    thermal_occupation: m.thermal_occupation,
                })
                .collect(),
            edges: config
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    kind: e.kind.into(),
                    from: name(e.from),
                    to: name(e.to),
                    strength: Value::from_complex(e.strength),
                })
                .collect(),
        }
    }

    fn cavity_index(&self, key: &str) -> Option<usize> {
        self.cavities
            .iter()
            .position(|c| c.name == key)
            .or_else(|| key.parse().ok().filter(|i| *i < self.cavities.len()))
    }

    fn mechanical_index(&self, key: &str) -> Option<usize> {
        self.mechanicals
            .iter()
            .position(|m| m.name == key)
            .or_else(|| key.parse().ok().filter(|i| *i < self.mechanicals.len()))
    }

    fn edge_index(&self, key: &str) -> Option<usize> {
        if let Ok(i) = key.parse::<usize>() {
            return (i < self.edges.len()).then_some(i);
        }
        let (a, b) = key.split_once('-')?;
        self.edges
            .iter()
            .position(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
    }

    fn slot(&mut self, path: &str) -> Result<&mut f64, PathError> {
        let bad = || PathError(path.to_string());
        let mut parts = path.split('.');
        let (section, key, field) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(s), Some(k), Some(f), None) => (s, k, f),
            _ => return Err(bad()),
        };
        match section {
            "cavities" => {
                let i = self.cavity_index(key).ok_or_else(bad)?;
                let c = &mut self.cavities[i];
                match field {
                    "detuning" => Ok(&mut c.detuning),
                    "decay" => Ok(&mut c.decay),
                    "drive" => real_slot(&mut c.drive).ok_or_else(bad),
                    _ => Err(bad()),
                }
            }
            "mechanicals" => {
                let i = self.mechanical_index(key).ok_or_else(bad)?;
                let m = &mut self.mechanicals[i];
                match field {
                    "frequency" => Ok(&mut m.frequency),
                    "damping" => Ok(&mut m.damping),
                    "thermal_occupation" => Ok(&mut m.thermal_occupation),
                    _ => Err(bad()),
                }
            }
            "edges" => {
                let i = self.edge_index(key).ok_or_else(bad)?;
                match field {
                    "strength" => real_slot(&mut self.edges[i].strength).ok_or_else(bad),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }

    /// Sets a scalar parameter such as `cavities.a.decay`,
    /// `mechanicals.1.frequency` or `edges.a-b2.strength`. Complex
    /// quantities are replaced by the real value given.
    pub fn set(&mut self, path: &str, value: f64) -> Result<(), PathError> {
        *self.slot(path)? = value;
        Ok(())
    }

    pub fn get(&self, path: &str) -> Result<f64, PathError> {
        let mut copy = self.clone();
        let v = *copy.slot(path)?;
        Ok(v)
    }
}

fn real_slot(v: &mut Value) -> Option<&mut f64> {
    if let Value::Complex([re, _]) = *v {
        *v = Value::Real(re);
    }
    match v {
        Value::Real(x) => Some(x),
        Value::Complex(_) => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parameter path `{0}` does not resolve (expected cavities.<name>.<field>, mechanicals.<name>.<field> or edges.<from-to>.strength)")]
pub struct PathError(pub String);
