//! Named parameter sets for the standard cooling landscapes.
//!
//! Physical parameters are fixed; grid ranges and resolutions are presentation
//! choices (100 points per axis unless overridden).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::{
    CavityDoc, Document, EdgeDoc, KindDoc, MechanicalDoc, ModeDoc, TopologyDoc, Value,
};
use crate::sweep::{Axis, Case, SweepSpec};

pub const DEFAULT_POINTS: usize = 100;

pub const NAMES: &[&str] = &[
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b",
    "fig7a", "fig7b", "fig7c", "fig7d", "fig7e", "fig7f", "fig8a", "fig8b", "fig11a", "fig11b",
    "fig11c", "fig11d", "fig13a", "fig13b", "table1",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomicSpec {
    pub levels: usize,
    pub ratio: Axis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Job {
    Solve(Document),
    Sweep(SweepSpec),
    Atomic(AtomicSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    pub description: String,
    /// Column the figure panel shows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<String>,
    pub job: Job,
}

#[derive(Debug, thiserror::Error)]
pub enum PresetError {
    #[error("unknown preset `{0}`; known presets: {known}", known = NAMES.join(", "))]
    Unknown(String),
    #[error("preset document: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Preset {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presets serialize")
    }

    pub fn from_json(text: &str) -> Result<Preset, PresetError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Sets the resolution of every axis.
    pub fn with_points(mut self, points: usize) -> Preset {
        match &mut self.job {
            Job::Sweep(s) => s.axes.iter_mut().for_each(|a| a.points = points),
            Job::Atomic(a) => a.ratio.points = points,
            Job::Solve(_) => {}
        }
        self
    }
}

fn cavity(name: &str, detuning: f64, decay: f64) -> CavityDoc {
    CavityDoc {
        name: name.into(),
        detuning,
        decay,
        drive: Value::Real(0.0),
    }
}

fn mech(name: &str, frequency: f64) -> MechanicalDoc {
    MechanicalDoc {
        name: name.into(),
        frequency,
        damping: 1e-5,
        thermal_occupation: 1000.0,
    }
}

fn edge(kind: KindDoc, from: &str, to: &str, strength: f64) -> EdgeDoc {
    EdgeDoc {
        kind,
        from: from.into(),
        to: to.into(),
        strength: Value::Real(strength),
    }
}

fn om(from: &str, to: &str, s: f64) -> EdgeDoc {
    edge(KindDoc::Optomechanical, from, to, s)
}

/// Intermediate cavity `a` on both resonators, auxiliary cavity `as` on b1.
pub fn n_type() -> Document {
    Document {
        parameter_mode: ModeDoc::Effective,
        topology: Some(TopologyDoc::NType),
        cavities: vec![cavity("a", 1.0, 0.1), cavity("as", 1.0, 0.1)],
        mechanicals: vec![mech("b1", 1.0), mech("b2", 1.0)],
        edges: vec![
            om("a", "b1", 0.05),
            om("a", "b2", 0.05),
            om("as", "b1", 0.08),
        ],
    }
}

/// Two cavities and two resonators with every coupling channel open.
pub fn network4() -> Document {
    Document {
        parameter_mode: ModeDoc::Effective,
        topology: Some(TopologyDoc::Network4),
        cavities: vec![cavity("a", 1.0, 0.1), cavity("as", 1.0, 0.1)],
        mechanicals: vec![mech("b1", 1.0), mech("b2", 1.0)],
        edges: vec![
            om("a", "b1", 0.05),
            om("a", "b2", 0.05),
            om("as", "b1", 0.08),
            om("as", "b2", 0.08),
            edge(KindDoc::PhotonHop, "a", "as", 0.03),
            edge(KindDoc::PhononHop, "b1", "b2", 0.03),
        ],
    }
}

/// N resonators on cavity `a`, nearest-neighbour phonon hopping, auxiliary
/// cavity `as` on b1.
pub fn chain(n: usize) -> Document {
    let names: Vec<String> = (1..=n).map(|l| format!("b{l}")).collect();
    let mut edges: Vec<EdgeDoc> = names.iter().map(|b| om("a", b, 0.05)).collect();
    edges.push(om("as", "b1", 0.1));
    for w in names.windows(2) {
        edges.push(edge(KindDoc::PhononHop, &w[0], &w[1], 0.06));
    }
    Document {
        parameter_mode: ModeDoc::Effective,
        topology: Some(TopologyDoc::Chain),
        cavities: vec![cavity("a", 1.0, 0.1), cavity("as", 1.0, 0.1)],
        mechanicals: names.iter().map(|b| mech(b, 1.0)).collect(),
        edges,
    }
}

fn case(label: &str, set: &[(&str, f64)]) -> Case {
    Case {
        label: label.into(),
        set: set
            .iter()
            .map(|(p, v)| (p.to_string(), *v))
            .collect::<BTreeMap<_, _>>(),
    }
}

const J: &str = "edges.a-as.strength";
const ETA: &str = "edges.b1-b2.strength";
const GS1: &str = "edges.as-b1.strength";
const GS2: &str = "edges.as-b2.strength";
const KAPPA: &str = "cavities.a.decay";

fn closed(names: &[&str]) -> Case {
    let path = |n: &str| match n {
        "J" => J,
        "eta" => ETA,
        "Gs1" => GS1,
        "Gs2" => GS2,
        _ => unreachable!(),
    };
    let label = format!("{}=0", names.join("="));
    let set: Vec<(&str, f64)> = names.iter().map(|n| (path(n), 0.0)).collect();
    case(&label, &set)
}

fn chain_cases(n: usize) -> Vec<Case> {
    let mut off = vec![("edges.as-b1.strength".to_string(), 0.0)];
    for l in 1..n {
        off.push((format!("edges.b{}-b{}.strength", l, l + 1), 0.0));
    }
    let off: Vec<(&str, f64)> = off.iter().map(|(p, v)| (p.as_str(), *v)).collect();
    vec![case("breaking", &[]), case("unbreaking", &off)]
}

fn sweep(base: Document, axes: Vec<Axis>, cases: Vec<Case>) -> Job {
    Job::Sweep(SweepSpec { base, axes, cases })
}

fn preset(name: &str, description: &str, plot: Option<&str>, job: Job) -> Preset {
    Preset {
        name: name.into(),
        description: description.into(),
        plot: plot.map(str::to_string),
        job,
    }
}

pub fn load(name: &str) -> Result<Preset, PresetError> {
    let p = DEFAULT_POINTS;
    let lin = |path: &str, min, max| Axis::linear(path, min, max, p);
    let n1 = Some("n_f_1");
    let n2 = Some("n_f_2");
    let fig2_ac = || vec![lin("cavities.a.detuning", 0.5, 1.5), lin(KAPPA, 0.05, 1.0)];
    let fig2_cd = || {
        vec![
            lin("cavities.as.detuning", 0.5, 1.5),
            lin("cavities.as.decay", 0.05, 1.0),
        ]
    };
    let fig3 = |gs1: f64| {
        let mut base = n_type();
        base.set(GS1, gs1).expect("preset path");
        sweep(
            base,
            vec![
                lin("mechanicals.b2.frequency", 0.9, 1.1),
                lin(KAPPA, 0.05, 1.0),
            ],
            vec![],
        )
    };
    let fig4 = || {
        sweep(
            n_type(),
            vec![lin(GS1, 0.0, 0.3)],
            ["0.4", "0.8", "1.2"]
                .iter()
                .map(|k| {
                    case(
                        &format!("kappa_s={k}"),
                        &[("cavities.as.decay", k.parse().unwrap())],
                    )
                })
                .collect(),
        )
    };
    let fig7 = |sets: &[&[&str]]| {
        sweep(
            network4(),
            vec![lin(KAPPA, 0.01, 1.0)],
            sets.iter().map(|s| closed(s)).collect(),
        )
    };
    let one: &[&[&str]] = &[&["J"], &["eta"], &["Gs1"], &["Gs2"]];
    let two: &[&[&str]] = &[
        &["J", "eta"],
        &["Gs1", "Gs2"],
        &["eta", "Gs1"],
        &["J", "Gs1"],
        &["J", "Gs2"],
        &["eta", "Gs2"],
    ];
    let three: &[&[&str]] = &[
        &["J", "Gs1", "Gs2"],
        &["eta", "Gs1", "Gs2"],
        &["J", "eta", "Gs1"],
        &["J", "eta", "Gs2"],
    ];
    let fig11 = |n: usize, axis: Axis| sweep(chain(n), vec![axis], chain_cases(n));
    let atomic = |levels| {
        Job::Atomic(AtomicSpec {
            levels,
            ratio: lin("ratio", 0.0, 3.0),
        })
    };

    let out = match name {
        "fig2a" => preset(
            name,
            "N-type system, n_f_1 over intermediate-cavity detuning and decay",
            n1,
            sweep(n_type(), fig2_ac(), vec![]),
        ),
        "fig2b" => preset(
            name,
            "N-type system, n_f_2 over intermediate-cavity detuning and decay",
            n2,
            sweep(n_type(), fig2_ac(), vec![]),
        ),
        "fig2c" => preset(
            name,
            "N-type system, n_f_1 over auxiliary-cavity detuning and decay",
            n1,
            sweep(n_type(), fig2_cd(), vec![]),
        ),
        "fig2d" => preset(
            name,
            "N-type system, n_f_2 over auxiliary-cavity detuning and decay",
            n2,
            sweep(n_type(), fig2_cd(), vec![]),
        ),
        "fig3a" => preset(
            name,
            "dark mode intact (Gs1 = 0), n_f_1 over omega_2 and kappa",
            n1,
            fig3(0.0),
        ),
        "fig3b" => preset(
            name,
            "dark mode intact (Gs1 = 0), n_f_2 over omega_2 and kappa",
            n2,
            fig3(0.0),
        ),
        "fig3c" => preset(
            name,
            "dark mode broken (Gs1 = 0.08), n_f_1 over omega_2 and kappa",
            n1,
            fig3(0.08),
        ),
        "fig3d" => preset(
            name,
            "dark mode broken (Gs1 = 0.08), n_f_2 over omega_2 and kappa",
            n2,
            fig3(0.08),
        ),
        "fig4a" => preset(
            name,
            "n_f_1 against Gs1 for three auxiliary decay rates",
            n1,
            fig4(),
        ),
        "fig4b" => preset(
            name,
            "n_f_2 against Gs1 for three auxiliary decay rates",
            n2,
            fig4(),
        ),
        "fig7a" => preset(
            name,
            "network system, one channel closed, n_f_1 against kappa",
            n1,
            fig7(one),
        ),
        "fig7b" => preset(
            name,
            "network system, one channel closed, n_f_2 against kappa",
            n2,
            fig7(one),
        ),
        "fig7c" => preset(
            name,
            "network system, two channels closed, n_f_1 against kappa",
            n1,
            fig7(two),
        ),
        "fig7d" => preset(
            name,
            "network system, two channels closed, n_f_2 against kappa",
            n2,
            fig7(two),
        ),
        "fig7e" => preset(
            name,
            "network system, three channels closed, n_f_1 against kappa",
            n1,
            fig7(three),
        ),
        "fig7f" => preset(
            name,
            "network system, three channels closed, n_f_2 against kappa",
            n2,
            fig7(three),
        ),
        "fig8a" => {
            let cases = vec![
                case("Gs2=4Gs1", &[(GS1, 0.02), (GS2, 0.08)]),
                case("Gs1=4Gs2", &[(GS1, 0.08), (GS2, 0.02)]),
            ];
            preset(
                name,
                "asymmetric auxiliary couplings swap the two occupations",
                None,
                sweep(network4(), vec![lin(KAPPA, 0.01, 1.0)], cases),
            )
        }
        "fig8b" => preset(
            name,
            "occupations against Gs2 at Gs1 = 0.08 (Gs2/Gs1 from 0 to 3)",
            None,
            sweep(network4(), vec![lin(GS2, 0.0, 0.24)], vec![]),
        ),
        "fig11a" => preset(
            name,
            "three-resonator chain against cavity detuning",
            None,
            fig11(3, lin("cavities.a.detuning", 0.5, 1.5)),
        ),
        "fig11b" => preset(
            name,
            "four-resonator chain against cavity detuning",
            None,
            fig11(4, lin("cavities.a.detuning", 0.5, 1.5)),
        ),
        "fig11c" => preset(
            name,
            "three-resonator chain against cavity decay",
            None,
            fig11(3, lin(KAPPA, 0.01, 1.0)),
        ),
        "fig11d" => preset(
            name,
            "four-resonator chain against cavity decay",
            None,
            fig11(4, lin(KAPPA, 0.01, 1.0)),
        ),
        "fig13a" => preset(
            name,
            "three-level atom, excited-state weights against Omega1/Omega2",
            None,
            atomic(3),
        ),
        "fig13b" => preset(
            name,
            "four-level atom, excited-state weights against Omega3/Omega2",
            None,
            atomic(4),
        ),
        "table1" => preset(
            name,
            "network system at the scaled experimental parameters",
            None,
            Job::Solve(network4()),
        ),
        _ => return Err(PresetError::Unknown(name.to_string())),
    };
    Ok(out)
}
