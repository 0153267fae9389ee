use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::IoError;
use crate::automata::Symbol;
use crate::prover::{Axiom, Dir, Proof, ProofStep, Rule, Subst};
use crate::term::{parse_open_term, parse_term, Name, Path, ProcessEnv, Sel, Term};

pub const PROOF_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SerializedProof {
    version: u32,
    env: BTreeMap<String, String>,
    goal: Option<(String, String)>,
    steps: Vec<SerializedStep>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SerializedStep {
    id: usize,
    kind: String,
    lhs: String,
    rhs: String,
    #[serde(default)]
    payload: Map<String, Value>,
}

fn path_text(p: &[Sel]) -> String {
    p.iter()
        .map(|s| match s {
            Sel::Left => 'L',
            Sel::Right => 'R',
            Sel::Body => 'P',
        })
        .collect()
}

fn dir_text(d: Dir) -> &'static str {
    match d {
        Dir::LeftToRight => "LR",
        Dir::RightToLeft => "RL",
    }
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn payload(rule: &Rule) -> Value {
    match rule {
        Rule::Refl => json!({}),
        Rule::Sym(p) | Rule::CongPrefix(p) => json!({ "premise": p }),
        Rule::Trans(ps) => json!({ "premises": ps }),
        Rule::CongChoice(l, r) => json!({ "left": l, "right": r }),
        Rule::Axiom { axiom, subst, path, .. } => {
            let mut s = Map::new();
            if let Some(a) = &subst.action {
                s.insert("a".into(), json!(a.to_string()));
            }
            for (v, t) in &subst.terms {
                s.insert(v.clone(), json!(t.to_string()));
            }
            json!({ "axiom": axiom.name(), "subst": s, "path": path_text(path) })
        }
        Rule::Aci { path } => json!({ "path": path_text(path) }),
        Rule::Unfold { constant, dir, path } => {
            json!({ "constant": constant.to_string(), "dir": dir_text(*dir), "path": path_text(path) })
        }
        Rule::Fold { constant, var, body, premise } => {
            json!({ "constant": constant.to_string(), "var": var.to_string(), "body": body.to_string(), "premise": premise })
        }
        Rule::USys { vars, bodies, left, right, premises, index } => json!({
            "vars": strings(vars),
            "bodies": strings(bodies),
            "left": strings(left),
            "right": strings(right),
            "premises": premises,
            "index": index,
        }),
    }
}

/// Pretty JSON with sorted `env` keys and steps in order.
pub fn write_proof(pr: &Proof) -> String {
    let s = SerializedProof {
        version: PROOF_VERSION,
        env: pr.env.iter().map(|(c, b)| (c.to_string(), b.to_string())).collect(),
        goal: pr.goal().map(|(l, r)| (l.to_string(), r.to_string())),
        steps: pr
            .steps
            .iter()
            .enumerate()
            .map(|(id, s)| SerializedStep {
                id,
                kind: s.rule.kind().to_string(),
                lhs: s.lhs.to_string(),
                rhs: s.rhs.to_string(),
                payload: match payload(&s.rule) {
                    Value::Object(m) => m,
                    _ => unreachable!(),
                },
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&s).expect("plain data serializes");
    out.push('\n');
    out
}

/// Field accessors that name the offending field in their errors.
struct Fields<'a> {
    at: String,
    map: &'a Map<String, Value>,
    steps: usize,
}

impl Fields<'_> {
    fn field(&self, key: &str) -> String {
        format!("{}.{key}", self.at)
    }

    fn get(&self, key: &str) -> Result<&Value, IoError> {
        self.map.get(key).ok_or_else(|| IoError::schema(self.field(key), "missing"))
    }

    fn str(&self, key: &str) -> Result<&str, IoError> {
        self.get(key)?.as_str().ok_or_else(|| IoError::schema(self.field(key), "expected a string"))
    }

    fn uint(&self, key: &str) -> Result<usize, IoError> {
        let v = self.get(key)?;
        v.as_u64().map(|n| n as usize).ok_or_else(|| IoError::schema(self.field(key), "expected a non-negative integer"))
    }

    fn step(&self, key: &str) -> Result<usize, IoError> {
        let id = self.uint(key)?;
        self.check_id(&self.field(key), id)
    }

    fn check_id(&self, field: &str, id: usize) -> Result<usize, IoError> {
        if id < self.steps {
            Ok(id)
        } else {
            Err(IoError::schema(field, format!("undefined step id {id}")))
        }
    }

    fn list(&self, key: &str) -> Result<&Vec<Value>, IoError> {
        self.get(key)?.as_array().ok_or_else(|| IoError::schema(self.field(key), "expected a list"))
    }

    fn steps(&self, key: &str) -> Result<Vec<usize>, IoError> {
        self.list(key)?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let f = format!("{}[{i}]", self.field(key));
                let id = v.as_u64().ok_or_else(|| IoError::schema(&f, "expected a step id"))? as usize;
                self.check_id(&f, id)
            })
            .collect()
    }

    fn terms(&self, key: &str, vars: &[&str]) -> Result<Vec<Term>, IoError> {
        self.list(key)?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let f = format!("{}[{i}]", self.field(key));
                let s = v.as_str().ok_or_else(|| IoError::schema(&f, "expected a term"))?;
                term(&f, s, vars)
            })
            .collect()
    }

    fn path(&self, key: &str) -> Result<Path, IoError> {
        self.str(key)?
            .chars()
            .map(|c| match c {
                'L' => Ok(Sel::Left),
                'R' => Ok(Sel::Right),
                'P' => Ok(Sel::Body),
                _ => Err(IoError::schema(self.field(key), format!("`{c}` is not one of L, R, P"))),
            })
            .collect()
    }

    fn dir(&self, key: &str) -> Result<Dir, IoError> {
        match self.str(key)? {
            "LR" => Ok(Dir::LeftToRight),
            "RL" => Ok(Dir::RightToLeft),
            d => Err(IoError::schema(self.field(key), format!("unknown direction `{d}`"))),
        }
    }
}

fn term(field: &str, text: &str, vars: &[&str]) -> Result<Term, IoError> {
    parse_open_term(text, vars).map_err(|source| IoError::Term { field: field.to_string(), source })
}

fn rule(kind: &str, f: &Fields, at: &str) -> Result<Rule, IoError> {
    Ok(match kind {
        "Refl" => Rule::Refl,
        "Sym" => Rule::Sym(f.step("premise")?),
        "CongPrefix" => Rule::CongPrefix(f.step("premise")?),
        "Trans" => Rule::Trans(f.steps("premises")?),
        "CongChoice" => Rule::CongChoice(f.step("left")?, f.step("right")?),
        "AxiomLR" | "AxiomRL" => {
            let name = f.str("axiom")?;
            let axiom = Axiom::parse(name).ok_or_else(|| IoError::schema(f.field("axiom"), format!("`{name}` is not an axiom of W")))?;
            let dir = if kind == "AxiomLR" { Dir::LeftToRight } else { Dir::RightToLeft };
            let raw = f.get("subst")?.as_object().ok_or_else(|| IoError::schema(f.field("subst"), "expected an object"))?;
            let mut subst = Subst::new();
            for (v, t) in raw {
                let field = format!("{}.{v}", f.field("subst"));
                let text = t.as_str().ok_or_else(|| IoError::schema(&field, "expected a string"))?;
                if v == "a" {
                    if !Symbol::is_valid_name(text) {
                        return Err(IoError::schema(field, format!("`{text}` is not an action symbol")));
                    }
                    subst.action = Some(Symbol::new(text));
                } else {
                    subst.terms.insert(v.clone(), term(&field, text, &[])?);
                }
            }
            Rule::Axiom { axiom, dir, subst, path: f.path("path")? }
        }
        "ACI" => Rule::Aci { path: f.path("path")? },
        "Unfold" => Rule::Unfold { constant: Name::new(f.str("constant")?), dir: f.dir("dir")?, path: f.path("path")? },
        "Fold" => {
            let var = f.str("var")?;
            Rule::Fold {
                constant: Name::new(f.str("constant")?),
                var: Name::new(var),
                body: term(&f.field("body"), f.str("body")?, &[var])?,
                premise: f.step("premise")?,
            }
        }
        "USys" => {
            let vars: Vec<String> = f
                .list("vars")?
                .iter()
                .map(|v| v.as_str().map(str::to_string).ok_or_else(|| IoError::schema(f.field("vars"), "expected names")))
                .collect::<Result<_, _>>()?;
            let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
            Rule::USys {
                bodies: f.terms("bodies", &var_refs)?,
                vars: vars.iter().map(|v| Name::new(v)).collect(),
                left: f.terms("left", &[])?,
                right: f.terms("right", &[])?,
                premises: f.steps("premises")?,
                index: f.uint("index")?,
            }
        }
        other => return Err(IoError::schema(format!("{at}.kind"), format!("unknown rule `{other}`"))),
    })
}

/// Reads a `.wproof` certificate. Structural problems are reported here;
/// whether the steps are valid is left to the checker.
pub fn read_proof(text: &str) -> Result<Proof, IoError> {
    let s: SerializedProof = serde_json::from_str(text)?;
    if s.version != PROOF_VERSION {
        return Err(IoError::schema("version", format!("unsupported version {}", s.version)));
    }
    let mut env = ProcessEnv::new();
    for (c, body) in &s.env {
        let field = format!("env.{c}");
        let t = term(&field, body, &[])?;
        env.define(Name::new(c), t).map_err(|source| IoError::Definition { field, source })?;
    }
    let n = s.steps.len();
    let mut steps = Vec::with_capacity(n);
    for (i, st) in s.steps.iter().enumerate() {
        let at = format!("steps[{i}]");
        if st.id != i {
            return Err(IoError::schema(format!("{at}.id"), format!("expected {i}, found {}", st.id)));
        }
        let f = Fields { at: format!("{at}.payload"), map: &st.payload, steps: n };
        let rule = rule(&st.kind, &f, &at)?;
        steps.push(ProofStep {
            lhs: parse_term(&st.lhs).map_err(|source| IoError::Term { field: format!("{at}.lhs"), source })?,
            rhs: parse_term(&st.rhs).map_err(|source| IoError::Term { field: format!("{at}.rhs"), source })?,
            rule,
        });
    }
    let proof = Proof { env, steps };
    let goal = match &s.goal {
        Some((l, r)) => Some((term("goal[0]", l, &[])?, term("goal[1]", r, &[])?)),
        None => None,
    };
    let actual = proof.goal().map(|(l, r)| (l.clone(), r.clone()));
    if goal != actual {
        return Err(IoError::schema("goal", "does not match the conclusion of the last step"));
    }
    Ok(proof)
}
