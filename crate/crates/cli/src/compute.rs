use lossinfo::{
    conditional_entropy, conditional_information, entropy, information, uncertainty_reduction,
    Quantity, UncertaintyReport,
};
use serde::Serialize;

use crate::error::CliResult;
use crate::report::{blocks, table, Engine, Num, ENGINE};
use crate::scenario::{Query, Scenario};

#[derive(Debug, Serialize)]
pub struct ComputeReport {
    pub engine: Engine,
    pub input_sha256: String,
    pub command: &'static str,
    pub results: Vec<QueryResult>,
}

#[derive(Debug, Serialize)]
pub struct QueryResult {
    pub index: usize,
    pub quantity: &'static str,
    pub target: String,
    pub given: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<Vec<String>>,
    pub loss: String,
    /// Nats for log-based losses.
    pub value: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_bits: Option<Num>,
    pub risk_from: Num,
    pub risk_to: Num,
    pub partition_from: String,
    pub partition_to: String,
}

pub fn answer(scenario: &Scenario, query: &Query) -> lossinfo::Result<UncertaintyReport> {
    let (x, loss) = scenario.target(query.target, query.loss)?;
    let space = &scenario.space;
    let given = scenario.partition(&query.given)?;
    match query.quantity {
        Quantity::Entropy => entropy(space, &x, &loss),
        Quantity::ConditionalEntropy => conditional_entropy(space, &x, &loss, &given),
        Quantity::Information => information(space, &x, &loss, &given),
        Quantity::ConditionalInformation => {
            let condition = scenario.partition(&query.condition)?;
            conditional_information(space, &x, &loss, &condition, &given)
        }
        Quantity::UncertaintyReduction => {
            let from = scenario.partition(&query.condition)?;
            uncertainty_reduction(space, &x, &loss, &from, &given)
        }
    }
}

pub fn run(scenario: &Scenario, digest: String) -> CliResult<ComputeReport> {
    let mut results = Vec::new();
    for (index, q) in scenario.queries.iter().enumerate() {
        let r = answer(scenario, q)?;
        let value = Num(r.value);
        let takes_condition = matches!(
            q.quantity,
            Quantity::ConditionalInformation | Quantity::UncertaintyReduction
        );
        results.push(QueryResult {
            index,
            quantity: q.quantity.symbol(),
            target: scenario.names[q.target].clone(),
            given: scenario.names_of(&q.given),
            condition: takes_condition.then(|| scenario.names_of(&q.condition)),
            loss: q.loss.to_string(),
            value,
            value_bits: q.loss.is_log_based().then(|| value.bits()),
            risk_from: Num(r.risk_from),
            risk_to: Num(r.risk_to),
            partition_from: blocks(&r.from),
            partition_to: blocks(&r.to),
        });
    }
    Ok(ComputeReport {
        engine: ENGINE,
        input_sha256: digest,
        command: "compute",
        results,
    })
}

pub fn render_table(report: &ComputeReport) -> String {
    let rows: Vec<Vec<String>> = report
        .results
        .iter()
        .map(|r| {
            let mut given = r.given.join(",");
            if let Some(c) = &r.condition {
                given = format!("{given} | {}", c.join(","));
            }
            vec![
                r.index.to_string(),
                r.quantity.to_string(),
                r.target.clone(),
                given,
                r.loss.clone(),
                r.value.to_string(),
                r.value_bits.map_or_else(String::new, |b| b.to_string()),
                r.risk_from.to_string(),
                r.risk_to.to_string(),
            ]
        })
        .collect();
    table(
        &[
            "#",
            "quantity",
            "target",
            "given",
            "loss",
            "value",
            "bits",
            "risk_from",
            "risk_to",
        ],
        &rows,
    )
}
