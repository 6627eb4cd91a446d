use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Edge, Symbol, Trellis, TrellisError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelJson {
    pub vertices: Vec<VertexJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: u32,
    pub to: u32,
    pub label: Symbol,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalJson {
    pub id: u32,
    pub logical_label: u64,
}

/// Serialized trellis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrellisJson {
    pub depth: usize,
    #[serde(default)]
    pub label_bits: usize,
    pub levels: Vec<LevelJson>,
    pub sections: Vec<Vec<EdgeJson>>,
    pub goals: Vec<GoalJson>,
}

impl From<&Trellis> for TrellisJson {
    fn from(t: &Trellis) -> Self {
        let labels = t.vertex_labels();
        TrellisJson {
            depth: t.depth(),
            label_bits: t.label_bits(),
            levels: t
                .level_sizes()
                .iter()
                .enumerate()
                .map(|(d, &size)| LevelJson {
                    vertices: (0..size as u32)
                        .map(|id| VertexJson {
                            id,
                            label: labels.map(|l| l[d][id as usize]),
                        })
                        .collect(),
                })
                .collect(),
            sections: t
                .sections()
                .iter()
                .map(|sec| {
                    sec.iter()
                        .map(|e| EdgeJson {
                            from: e.from,
                            to: e.to,
                            label: e.label,
                        })
                        .collect()
                })
                .collect(),
            goals: t
                .goal_labels()
                .iter()
                .enumerate()
                .map(|(id, &g)| GoalJson {
                    id: id as u32,
                    logical_label: g,
                })
                .collect(),
        }
    }
}

impl TryFrom<TrellisJson> for Trellis {
    type Error = TrellisError;

    fn try_from(j: TrellisJson) -> Result<Self, Self::Error> {
        if j.levels.len() != j.depth + 1 || j.sections.len() != j.depth {
            return Err(TrellisError::Malformed(
                "depth disagrees with levels/sections".into(),
            ));
        }
        let levels: Vec<usize> = j.levels.iter().map(|l| l.vertices.len()).collect();
        for l in &j.levels {
            if l.vertices
                .iter()
                .enumerate()
                .any(|(i, v)| v.id as usize != i)
            {
                return Err(TrellisError::Malformed(
                    "vertex ids must be dense and ordered".into(),
                ));
            }
        }
        let sections = j
            .sections
            .iter()
            .map(|sec| {
                sec.iter()
                    .map(|e| Edge {
                        from: e.from,
                        label: e.label,
                        to: e.to,
                    })
                    .collect()
            })
            .collect();
        let mut goals = vec![None; *levels.last().unwrap_or(&0)];
        for g in &j.goals {
            let slot = goals
                .get_mut(g.id as usize)
                .ok_or_else(|| TrellisError::Malformed(format!("goal id {} out of range", g.id)))?;
            *slot = Some(g.logical_label);
        }
        let goals = goals
            .into_iter()
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| {
                TrellisError::Malformed("every final vertex needs a goal entry".into())
            })?;
        let t = Trellis::from_parts(levels, sections, goals, j.label_bits)?;
        let has_labels = j
            .levels
            .iter()
            .all(|l| l.vertices.iter().all(|v| v.label.is_some()));
        if has_labels {
            let labels = j
                .levels
                .iter()
                .map(|l| l.vertices.iter().map(|v| v.label.unwrap()).collect())
                .collect();
            return Ok(t.with_vertex_labels(labels));
        }
        Ok(t)
    }
}

pub fn to_json(t: &Trellis) -> String {
    serde_json::to_string_pretty(&TrellisJson::from(t))
        .expect("trellis JSON is always serializable")
}

pub fn from_json(text: &str) -> Result<Trellis, TrellisError> {
    let j: TrellisJson = serde_json::from_str(text)?;
    Trellis::try_from(j)
}

fn edge_style(s: Symbol) -> &'static str {
    match s {
        Symbol::Pauli(crate::pauli::Pauli::I) => "solid",
        Symbol::Pauli(crate::pauli::Pauli::X) => "dashed, color=red",
        Symbol::Pauli(crate::pauli::Pauli::Y) => "dashed, color=darkgreen",
        Symbol::Pauli(crate::pauli::Pauli::Z) => "dotted, color=blue",
        Symbol::Tail(_) => "bold, color=gray40",
    }
}

/// Graphviz rendering, one rank per depth.
pub fn to_dot(t: &Trellis) -> String {
    let mut s = String::from(
        "digraph trellis {\n  rankdir=LR;\n  node [shape=circle, width=0.25, label=\"\"];\n",
    );
    let depth = t.depth();
    for (d, &size) in t.level_sizes().iter().enumerate() {
        let _ = write!(s, "  {{ rank=same;");
        for v in 0..size {
            let _ = write!(s, " v{d}_{v};");
        }
        s.push_str(" }\n");
    }
    for (v, g) in t.goal_labels().iter().enumerate() {
        let _ = writeln!(s, "  v{depth}_{v} [shape=doublecircle, xlabel=\"{g}\"];");
    }
    for (d, sec) in t.sections().iter().enumerate() {
        for e in sec {
            let _ = writeln!(
                s,
                "  v{}_{} -> v{}_{} [label=\"{}\", style={}];",
                d,
                e.from,
                d + 1,
                e.to,
                e.label,
                edge_style(e.label)
            );
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trellis::{atomic_trellis, bcjr_wolf};

    #[test]
    fn json_round_trip() {
        let t = atomic_trellis(&"IXXZ".parse().unwrap(), true);
        let back = from_json(&to_json(&t)).unwrap();
        assert_eq!(back, t);
        let b = bcjr_wolf(&["XXXX".parse().unwrap(), "ZZZZ".parse().unwrap()]).unwrap();
        let back = from_json(&to_json(&b)).unwrap();
        assert_eq!(back.vertex_labels(), b.vertex_labels());
        assert!(from_json("{\"depth\": 1}").is_err());
    }

    #[test]
    fn dot_mentions_every_edge() {
        let t = atomic_trellis(&"XZ".parse().unwrap(), false);
        let dot = to_dot(&t);
        assert_eq!(dot.matches("->").count(), t.num_edges());
        assert!(dot.starts_with("digraph"));
    }
}
