//! Scenario files: a joint table over named discrete variables plus queries.
//!
//! The table is row-major over the declared variable order, so the last
//! variable varies fastest. Each cell of the table is one atom of the sample
//! space.

use std::collections::{BTreeMap, HashSet};

use lossinfo::{LossModel, Partition, Quantity, RandomElement, SampleSpace};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::loss_spec::LossSpec;

/// Entries must sum to one within this tolerance.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub variables: Vec<VariableSpec>,
    pub joint: Vec<f64>,
    #[serde(default)]
    pub real_values: Option<BTreeMap<String, Vec<f64>>>,
    pub queries: Vec<QuerySpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableSpec {
    pub name: String,
    pub alphabet: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    pub quantity: String,
    pub target: String,
    pub given: Vec<String>,
    pub loss: String,
    #[serde(default)]
    pub condition: Option<Vec<String>>,
}

/// A validated query with variables resolved to indices.
#[derive(Debug, Clone)]
pub struct Query {
    pub quantity: Quantity,
    pub target: usize,
    pub given: Vec<usize>,
    pub condition: Vec<usize>,
    pub loss: LossSpec,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub names: Vec<String>,
    pub dims: Vec<usize>,
    pub space: SampleSpace,
    pub real_values: BTreeMap<usize, Vec<f64>>,
    pub queries: Vec<Query>,
}

pub fn parse_quantity(s: &str) -> Option<Quantity> {
    Some(match s {
        "H" => Quantity::Entropy,
        "H_cond" => Quantity::ConditionalEntropy,
        "I" => Quantity::Information,
        "I_cond" => Quantity::ConditionalInformation,
        "U" => Quantity::UncertaintyReduction,
        _ => return None,
    })
}

impl Scenario {
    /// Parses and validates; errors name the offending field.
    pub fn from_json(text: &str) -> CliResult<Scenario> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                CliError::schema(inner.to_string())
            } else {
                CliError::schema(format!("{path}: {inner}"))
            }
        })?;
        Scenario::validate(file)
    }

    pub fn validate(file: ScenarioFile) -> CliResult<Scenario> {
        if file.variables.is_empty() {
            return Err(CliError::schema(
                "variables: at least one variable is required",
            ));
        }
        let mut names = Vec::new();
        let mut dims = Vec::new();
        for (i, v) in file.variables.iter().enumerate() {
            if v.name.is_empty() {
                return Err(CliError::schema(format!(
                    "variables[{i}].name: must not be empty"
                )));
            }
            if names.contains(&v.name) {
                return Err(CliError::schema(format!(
                    "variables[{i}].name: duplicate variable `{}`",
                    v.name
                )));
            }
            if v.alphabet.is_empty() {
                return Err(CliError::schema(format!(
                    "variables[{i}].alphabet: must list at least one symbol"
                )));
            }
            let distinct: HashSet<&String> = v.alphabet.iter().collect();
            if distinct.len() != v.alphabet.len() {
                return Err(CliError::schema(format!(
                    "variables[{i}].alphabet: symbols must be distinct"
                )));
            }
            names.push(v.name.clone());
            dims.push(v.alphabet.len());
        }
        let lookup = |name: &str| names.iter().position(|n| n == name);

        let cells = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| CliError::schema("variables: table size overflows"))?;
        if file.joint.len() != cells {
            return Err(CliError::schema(format!(
                "joint: has {} entries but the alphabets {dims:?} need {cells}",
                file.joint.len()
            )));
        }
        for (i, &p) in file.joint.iter().enumerate() {
            if !(p.is_finite() && p >= 0.0) {
                return Err(CliError::schema(format!(
                    "joint[{i}]: entry {p} is not a nonnegative number"
                )));
            }
        }
        let total: f64 = file.joint.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(CliError::schema(format!(
                "joint: entries sum to {total}, not 1 within {SUM_TOLERANCE:e}"
            )));
        }
        // Removes the admitted rounding slack before the space checks its own,
        // tighter, normalization.
        let probabilities = file.joint.iter().map(|p| p / total).collect();
        let space =
            SampleSpace::new(probabilities).map_err(|e| CliError::schema(format!("joint: {e}")))?;

        let mut real_values = BTreeMap::new();
        for (name, values) in file.real_values.iter().flatten() {
            let var = lookup(name)
                .ok_or_else(|| CliError::schema(format!("real_values.{name}: unknown variable")))?;
            if values.len() != dims[var] {
                return Err(CliError::schema(format!(
                    "real_values.{name}: has {} values for an alphabet of {}",
                    values.len(),
                    dims[var]
                )));
            }
            if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
                return Err(CliError::schema(format!(
                    "real_values.{name}[{bad}]: must be finite"
                )));
            }
            real_values.insert(var, values.clone());
        }

        if file.queries.is_empty() {
            return Err(CliError::schema("queries: at least one query is required"));
        }
        let mut queries = Vec::new();
        for (i, q) in file.queries.iter().enumerate() {
            let field = |f: &str| format!("queries[{i}].{f}");
            let quantity = parse_quantity(&q.quantity).ok_or_else(|| {
                CliError::schema(format!(
                    "{}: unknown quantity `{}` (expected H, H_cond, I, I_cond or U)",
                    field("quantity"),
                    q.quantity
                ))
            })?;
            let resolve = |list: &[String], f: &str| -> CliResult<Vec<usize>> {
                list.iter()
                    .enumerate()
                    .map(|(j, n)| {
                        lookup(n).ok_or_else(|| {
                            CliError::schema(format!("{}[{j}]: unknown variable `{n}`", field(f)))
                        })
                    })
                    .collect()
            };
            let target = lookup(&q.target).ok_or_else(|| {
                CliError::schema(format!(
                    "{}: unknown variable `{}`",
                    field("target"),
                    q.target
                ))
            })?;
            let given = resolve(&q.given, "given")?;
            let condition = match &q.condition {
                Some(c) => resolve(c, "condition")?,
                None => Vec::new(),
            };
            let loss: LossSpec = q
                .loss
                .parse()
                .map_err(|e| CliError::schema(format!("{}: {e}", field("loss"))))?;
            match quantity {
                Quantity::Entropy if !given.is_empty() => {
                    return Err(CliError::schema(format!(
                        "{}: must be empty for H (use H_cond)",
                        field("given")
                    )));
                }
                Quantity::ConditionalInformation if q.condition.is_none() => {
                    return Err(CliError::schema(format!(
                        "{}: required for I_cond",
                        field("condition")
                    )));
                }
                Quantity::Entropy | Quantity::ConditionalEntropy | Quantity::Information
                    if q.condition.is_some() =>
                {
                    return Err(CliError::schema(format!(
                        "{}: only I_cond and U take a condition",
                        field("condition")
                    )));
                }
                _ => {}
            }
            if !loss.is_symbolic() && !real_values.contains_key(&target) {
                return Err(CliError::schema(format!(
                    "real_values: loss `{loss}` in {} needs real_values for `{}`",
                    field("loss"),
                    q.target
                )));
            }
            queries.push(Query {
                quantity,
                target,
                given,
                condition,
                loss,
            });
        }

        Ok(Scenario {
            names,
            dims,
            space,
            real_values,
            queries,
        })
    }

    pub fn atom_count(&self) -> usize {
        self.space.atom_count()
    }

    /// The symbol index of variable `var` at cell `atom`.
    pub fn symbol(&self, atom: usize, var: usize) -> usize {
        let stride: usize = self.dims[var + 1..].iter().product();
        (atom / stride) % self.dims[var]
    }

    pub fn symbols(&self, var: usize) -> Vec<usize> {
        (0..self.atom_count())
            .map(|a| self.symbol(a, var))
            .collect()
    }

    /// `σ(vars)`; the trivial partition when `vars` is empty.
    pub fn partition(&self, vars: &[usize]) -> lossinfo::Result<Partition> {
        let labels: Vec<Vec<usize>> = (0..self.atom_count())
            .map(|a| vars.iter().map(|&v| self.symbol(a, v)).collect())
            .collect();
        Partition::from_labels(&labels)
    }

    /// The per-symbol states of `var` as the loss sees them: one-hot vectors
    /// for symbolic losses, the real embedding otherwise.
    pub fn symbol_states(&self, var: usize, loss: LossSpec) -> Vec<Vec<f64>> {
        let k = self.dims[var];
        if loss.is_symbolic() {
            (0..k).map(|s| lossinfo::one_hot(k, s)).collect()
        } else {
            self.real_values[&var].iter().map(|&v| vec![v]).collect()
        }
    }

    /// The random element and loss model for a target under `loss`.
    pub fn target(
        &self,
        var: usize,
        loss: LossSpec,
    ) -> lossinfo::Result<(RandomElement, LossModel)> {
        let symbols = self.symbols(var);
        if loss.is_symbolic() {
            let k = self.dims[var];
            Ok((RandomElement::symbols(k, &symbols)?, loss.build(k)?))
        } else {
            let embedding = &self.real_values[&var];
            let values: Vec<f64> = symbols.iter().map(|&s| embedding[s]).collect();
            Ok((RandomElement::scalar(&values)?, loss.build(1)?))
        }
    }

    pub fn names_of(&self, vars: &[usize]) -> Vec<String> {
        vars.iter().map(|&v| self.names[v].clone()).collect()
    }
}
