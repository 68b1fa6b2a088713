use serde_json::{json, Map, Value};

use super::print::{print_diffpoly, PrintStyle};
use crate::engine::{AdeOrder, AdeResult};

fn options_value(opts: &std::collections::BTreeMap<String, String>) -> Value {
    Value::Object(opts.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect::<Map<_, _>>())
}

pub fn emit_json(res: &AdeResult) -> String {
    let ctx = &res.ctx;
    let mut terms: Vec<_> = res.diff.terms().collect();
    terms.sort_by(|a, b| super::print::canonical_order(ctx, b.1, a.1));
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|(c, m)| {
            let mono: Vec<Value> = m
                .iter()
                .map(|(v, e)| {
                    let single = crate::diffalg::DiffPoly::var(ctx, v.clone());
                    json!([print_diffpoly(&single, PrintStyle::Ascii), e])
                })
                .collect();
            json!({ "coeff": c.to_string(), "monomial": mono })
        })
        .collect();
    let order = match &res.order {
        AdeOrder::Ordinary(n) => json!(n),
        AdeOrder::Partial(v) => json!(v),
    };
    let v = json!({
        "status": "ok",
        "order": order,
        "degree": res.degree,
        "poly": print_diffpoly(&res.diff, PrintStyle::Ascii),
        "terms": terms,
        "options": options_value(&res.options),
        "warnings": res.warnings,
        "elapsed_ms": res.elapsed.as_millis() as u64,
    });
    serde_json::to_string_pretty(&v).expect("json")
}

pub fn emit_not_found_json(bound: &[u32], options: &std::collections::BTreeMap<String, String>, elapsed_ms: u64) -> String {
    let v = json!({
        "status": "not_found",
        "bound": bound,
        "options": options_value(options),
        "elapsed_ms": elapsed_ms,
    });
    serde_json::to_string_pretty(&v).expect("json")
}

pub fn emit_error_json(message: &str) -> String {
    serde_json::to_string_pretty(&json!({ "status": "error", "message": message })).expect("json")
}
