//! JSON reports for verdicts, audits and solver output.

use fairlot_core::mnw::{CeeiVerdict, MnwSolution};
use fairlot_core::properties::{Audit, PropertyVerdict, Witness};
use fairlot_core::{FractionalAllocation, Instance, Rational};
use serde_json::{json, Value};

use crate::io::{fractional_json, integral_json, rational_to_json};

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Share {
            agent,
            value,
            share,
            item,
        } => json!({
            "type": "share",
            "agent": agent,
            "value": rational_to_json(value),
            "share": rational_to_json(share),
            "item": item,
        }),
        Witness::Envy {
            agent,
            other,
            own_value,
            other_value,
            own_item,
            other_item,
        } => json!({
            "type": "envy",
            "agent": agent,
            "other": other,
            "own_value": rational_to_json(own_value),
            "other_value": rational_to_json(other_value),
            "own_item": own_item,
            "other_item": other_item,
        }),
        Witness::SdEnvy { agent, other, prefix } => json!({
            "type": "sd-envy",
            "agent": agent,
            "other": other,
            "prefix": prefix,
        }),
        Witness::Removal {
            agent,
            other,
            removed,
            own_value,
            other_value,
        } => json!({
            "type": "removal",
            "agent": agent,
            "other": other,
            "removed": removed,
            "own_value": rational_to_json(own_value),
            "other_value": rational_to_json(other_value),
        }),
        Witness::DominatingIntegral(a) => json!({ "type": "dominating", "allocation": integral_json(a) }),
        Witness::DominatingFractional(y) => json!({ "type": "dominating", "allocation": fractional_json(y) }),
        Witness::Group { s, t, y, delta } => json!({
            "type": "group",
            "s": s,
            "t": t,
            "y": y.iter().map(|r| rationals(r)).collect::<Vec<_>>(),
            "delta": rationals(delta),
        }),
    }
}

pub fn verdict_json(v: &PropertyVerdict) -> Value {
    json!({
        "property": v.property.name(),
        "holds": v.holds,
        "witness": v.witness.as_ref().map(witness_json),
    })
}

pub fn audit_json(audit: &Audit) -> Value {
    let ex_post: Vec<Value> = audit
        .ex_post
        .iter()
        .map(|v| {
            json!({
                "property": v.property.name(),
                "holds": v.holds,
                "failures": v.failures.iter().map(|(k, f)| json!({
                    "part": k,
                    "witness": f.witness.as_ref().map(witness_json),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "holds": audit.all_hold(),
        "ex_ante": audit.ex_ante.iter().map(verdict_json).collect::<Vec<_>>(),
        "ex_post": ex_post,
    })
}

/// `values[i][h] = v_i(X_h)`, ready to tabulate.
pub fn utility_table(inst: &Instance, x: &FractionalAllocation) -> Value {
    let n = inst.agents();
    let table: Vec<Value> = (0..n)
        .map(|i| {
            let row: Vec<Rational> = (0..n)
                .map(|h| inst.utility(i, x.row(h)).expect("shapes were checked"))
                .collect();
            rationals(&row)
        })
        .collect();
    Value::Array(table)
}

/// The allocation matrix with solver diagnostics; readable back as an
/// allocation.
pub fn mnw_json(sol: &MnwSolution) -> Value {
    let mut out = fractional_json(&sol.x);
    let extra = json!({
        "utilities": rationals(&sol.utilities),
        "slack": rational_to_json(&sol.slack),
        "exact": sol.is_exact(),
        "kkt_residual": sol.kkt_residual,
        "iterations": sol.iterations,
    });
    if let (Value::Object(o), Value::Object(e)) = (&mut out, extra) {
        o.extend(e);
    }
    out
}

pub fn ceei_json(v: &CeeiVerdict) -> Value {
    json!({
        "holds": v.holds,
        "violation": v.violation.as_ref().map(|w| json!({
            "agent": w.agent,
            "other": w.other,
            "item": w.item,
            "own_ratio": rational_to_json(&w.own_ratio),
            "other_ratio": rational_to_json(&w.other_ratio),
        })),
    })
}
