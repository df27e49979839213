use std::io::Write;

use delta_kernels::harness::ConvergenceRecord;
use delta_kernels::kernels::{Anchor, Cutoff};
use serde::Serialize;

/// Column order shared by the JSON objects and the CSV header.
pub const COLUMNS: [&str; 9] = [
    "kernel_family",
    "params",
    "test_function",
    "anchor",
    "cutoff",
    "computed",
    "target",
    "abs_error",
    "wall_time_ms",
];

#[derive(Serialize)]
struct Row<'a> {
    kernel_family: &'a str,
    params: String,
    test_function: &'a str,
    anchor: Anchor,
    cutoff: Cutoff,
    computed: f64,
    target: f64,
    abs_error: f64,
    wall_time_ms: f64,
}

#[derive(Serialize)]
struct ErrorRow<'a> {
    kernel_family: &'a str,
    params: String,
    test_function: &'a str,
    anchor: Anchor,
    cutoff: Cutoff,
    error: &'a str,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Item<'a> {
    Ok(Row<'a>),
    Failed(ErrorRow<'a>),
}

fn wall_ms(r: &ConvergenceRecord, timing: bool) -> f64 {
    if timing {
        r.wall_time.as_secs_f64() * 1e3
    } else {
        0.0
    }
}

pub fn json(records: &[ConvergenceRecord], timing: bool) -> serde_json::Result<String> {
    let items: Vec<Item> = records
        .iter()
        .map(|r| match &r.failure {
            None => Item::Ok(Row {
                kernel_family: r.kernel.family.name(),
                params: r.kernel.family.params(),
                test_function: &r.test_function_id,
                anchor: r.anchor,
                cutoff: r.cutoff,
                computed: r.computed,
                target: r.target,
                abs_error: r.abs_error,
                wall_time_ms: wall_ms(r, timing),
            }),
            Some(msg) => Item::Failed(ErrorRow {
                kernel_family: r.kernel.family.name(),
                params: r.kernel.family.params(),
                test_function: &r.test_function_id,
                anchor: r.anchor,
                cutoff: r.cutoff,
                error: msg,
            }),
        })
        .collect();
    serde_json::to_string_pretty(&items)
}

fn anchor_text(a: &Anchor) -> String {
    match a {
        Anchor::Point(x) => x.to_string(),
        Anchor::Angles { theta, phi } => format!("{theta};{phi}"),
    }
}

/// CSV with the fixed header. Failed rows leave the numeric columns empty;
/// their messages go to `errors`.
pub fn csv(records: &[ConvergenceRecord], timing: bool, errors: &mut impl Write) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for r in records {
        let head = [
            r.kernel.family.name().to_string(),
            r.kernel.family.params(),
            r.test_function_id.clone(),
            anchor_text(&r.anchor),
            r.cutoff.to_string(),
        ];
        let tail = match &r.failure {
            None => [r.computed, r.target, r.abs_error, wall_ms(r, timing)].map(|v| v.to_string()),
            Some(msg) => {
                writeln!(errors, "cutoff {}: {msg}", r.cutoff).ok();
                [String::new(), r.target.to_string(), String::new(), wall_ms(r, timing).to_string()]
            }
        };
        w.write_record(head.iter().chain(tail.iter()))?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
