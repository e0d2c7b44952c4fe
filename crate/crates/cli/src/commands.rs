use serde::Serialize;
use serde_json::Value;

use vptree::classify::{certify_minimal, classify, Certification, NotMinimal};
use vptree::coloring::{chromatic_number, criticality};
use vptree::gh::build_gh;
use vptree::graph6::serialize_graph;
use vptree::oracle::{default_bound, exists_representation, min_h};
use vptree::split::structural_battery;
use vptree::{Error, Graph, Limits};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classify,
    BuildGh,
    Certify { h: usize },
    Oracle { h: Option<usize>, bound: Option<usize> },
    Battery { h: usize },
    Critical,
    Color,
}

/// Outcome for one input record.
#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Body {
    Result(Value),
    /// A negative verdict that is not a failure, e.g. a non-VPT input.
    Rejected(String),
    Error(String),
}

#[derive(Debug, Serialize)]
pub struct Record {
    pub line: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(flatten)]
    pub body: Body,
    #[serde(skip)]
    pub human: String,
}

impl Record {
    pub fn parse_error(line: usize, e: &Error) -> Self {
        Record {
            line,
            input: None,
            body: Body::Error(e.to_string()),
            human: format!("error: {e}"),
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self.body, Body::Error(_))
    }
}

fn json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn done<T: Serialize>(value: &T, human: String) -> (Body, String) {
    (Body::Result(json(value)), human)
}

fn rejected(message: &str) -> (Body, String) {
    (Body::Rejected(message.to_string()), message.to_string())
}

fn failed(e: Error) -> (Body, String) {
    let text = format!("error: {e}");
    (Body::Error(e.to_string()), text)
}

pub fn run(command: Command, line: usize, g: &Graph, limits: &Limits) -> Record {
    let (body, human) = match evaluate(command, g, limits) {
        Ok(out) => out,
        Err(Error::NotVpt) => rejected("not a VPT graph"),
        Err(e) => failed(e),
    };
    Record {
        line,
        input: Some(serialize_graph(g)),
        body,
        human,
    }
}

fn evaluate(command: Command, g: &Graph, limits: &Limits) -> vptree::Result<(Body, String)> {
    Ok(match command {
        Command::Classify => {
            let r = classify(g, limits)?;
            let mut text = format!("h*={} ({})", r.h_star, json(&r.method).as_str().unwrap_or_default());
            if let Some(w) = &r.witness_clique {
                text.push_str(&format!(" witness {w}"));
            }
            done(&r, text)
        }
        Command::BuildGh => {
            let gh = build_gh(g)?;
            let graph6 = serialize_graph(&gh.graph);
            let roles: Vec<String> = gh.roles.iter().map(ToString::to_string).collect();
            let value = serde_json::json!({
                "graph6": graph6,
                "order": gh.graph.order(),
                "roles": roles,
            });
            (Body::Result(value), graph6)
        }
        Command::Certify { h } => {
            let c = certify_minimal(g, h, limits)?;
            let text = match &c {
                Certification::Certified(cert) => format!(
                    "certified minimal non-[{h},2,1]; H={} is {}-critical",
                    cert.h_graph6,
                    h + 1
                ),
                Certification::NotMinimal(reason) => format!("not minimal: {}", describe(reason)),
            };
            done(&c, text)
        }
        Command::Oracle { h, bound } => {
            let bound = bound.unwrap_or_else(|| default_bound(g));
            match h {
                Some(h) => {
                    let v = exists_representation(g, h, bound)?;
                    let text = if v.exists {
                        format!("({h},2,1)-representation found on {} nodes", node_count(&v.representation))
                    } else if v.chordality_refuted {
                        format!("none within {bound} nodes; not chordal, so none at all")
                    } else {
                        format!("none within {bound} nodes")
                    };
                    done(&v, text)
                }
                None => match min_h(g, bound) {
                    Ok(m) => {
                        let text = format!("min h = {} (hosts of at most {bound} nodes)", m.h);
                        done(&m, text)
                    }
                    Err(Error::NotWithinBound { bound }) => {
                        rejected(&format!("no representation within {bound} nodes"))
                    }
                    Err(e) => return Err(e),
                },
            }
        }
        Command::Battery { h } => {
            let b = structural_battery(g, h, limits)?;
            let failed: Vec<&str> = b.failed().map(|c| c.id.as_str()).collect();
            let text = if failed.is_empty() {
                format!("all {} conditions pass", b.conditions.len())
            } else {
                format!("failed: {}", failed.join(", "))
            };
            done(&b, text)
        }
        Command::Critical => {
            let c = criticality(g, limits.coloring_cap)?;
            let text = if c.is_critical() {
                format!("{}-critical", c.chi)
            } else {
                format!(
                    "chi={}, not critical ({} vertices, {} edges keep chi)",
                    c.chi,
                    c.failing_vertices.len(),
                    c.failing_edges.len()
                )
            };
            done(&c, text)
        }
        Command::Color => {
            let c = chromatic_number(g, limits.coloring_cap)?;
            let colors: Vec<String> = c.assignment.iter().map(ToString::to_string).collect();
            let text = format!("chi={} [{}]", c.chi, colors.join(" "));
            done(&c, text)
        }
    })
}

fn node_count(r: &Option<vptree::representation::Representation>) -> usize {
    r.as_ref().map_or(0, |r| r.host.node_count())
}

fn describe(reason: &NotMinimal) -> String {
    match reason {
        NotMinimal::WrongClass { h_star } => format!("h*={h_star}"),
        NotMinimal::DeletionStaysOutside { vertex, h_star } => {
            format!("deleting vertex {vertex} leaves h*={h_star}")
        }
        NotMinimal::BatteryFailed { conditions } => format!("conditions failed: {}", conditions.join(", ")),
        NotMinimal::NotAGhGraph => "not of the form G_H".into(),
        NotMinimal::SourceNotCritical { chi } => format!("H is not critical (chi={chi})"),
    }
}
