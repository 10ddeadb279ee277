use std::sync::LazyLock;

use regex::Regex;

use super::metamodel::{parse_template, RosettaMetamodel, Segment, SlotKind, SUBJECT_PLACEHOLDER};
use crate::gupri::Gupri;
use crate::model::{Decimal, Literal, RosettaStatement, SlotValue};
use crate::registry::Registries;

static QUANTITY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^([-+]?\d+(?:\.\d+)?)\s*(\S.*)$").expect("static regex"));

fn strip_period(s: &str) -> &str {
    let s = s.trim_end();
    s.strip_suffix('.').unwrap_or(s).trim_end()
}

/// Compiles a template into an anchored regex plus its placeholder order.
fn compile(template: &str) -> Option<(Regex, Vec<String>)> {
    let segments = parse_template(template).ok()?;
    let last = segments.len().saturating_sub(1);
    let mut pattern = String::from("^");
    let mut names = Vec::new();
    for (i, seg) in segments.iter().enumerate() {
        match seg {
            Segment::Text(t) => {
                let t = if i == last {
                    strip_period(t)
                } else {
                    t.as_str()
                };
                pattern.push_str(&regex::escape(t));
            }
            Segment::Placeholder(p) => {
                pattern.push_str("(.+?)");
                names.push(p.clone());
            }
        }
    }
    pattern.push('$');
    Regex::new(&pattern).ok().map(|r| (r, names))
}

fn bind(
    captures: &[(&str, &str)],
    m: &RosettaMetamodel,
    reg: &Registries,
) -> Option<RosettaStatement> {
    let capture = |name: &str| {
        captures
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v.trim())
    };
    let subject = reg
        .find_term_by_label(capture(SUBJECT_PLACEHOLDER)?)?
        .gupri
        .clone();
    let mut slots = Vec::with_capacity(m.slots.len());
    for def in &m.slots {
        let text = capture(&def.name)?;
        slots.push(match &def.kind {
            SlotKind::Resource => SlotValue::Resource {
                value: reg.find_term_by_label(text)?.gupri.clone(),
            },
            SlotKind::Literal { datatype } => SlotValue::Literal {
                value: Literal::new(text, *datatype).ok()?,
            },
            SlotKind::Quantity { .. } => {
                let caps = QUANTITY.captures(text)?;
                let value = Decimal::parse(&caps[1]).ok()?;
                let unit: Gupri = reg.find_unit_by_symbol(caps[2].trim())?.gupri.clone();
                SlotValue::Quantity { value, unit }
            }
        });
    }
    Some(RosettaStatement {
        metamodel: m.gupri.clone(),
        subject,
        slots,
    })
}

pub(crate) fn normalize_with(
    sentence: &str,
    metamodels: &[&RosettaMetamodel],
    reg: &Registries,
) -> Option<(Gupri, RosettaStatement)> {
    let sentence = strip_period(sentence.trim());
    for m in metamodels {
        let mut patterns: Vec<&str> = std::iter::once(m.label_template.as_str())
            .chain(m.surface_patterns.iter().map(String::as_str))
            .collect();
        patterns.sort_by_key(|p| std::cmp::Reverse(p.chars().count()));
        for p in patterns {
            let Some((re, names)) = compile(p) else {
                continue;
            };
            let Some(caps) = re.captures(sentence) else {
                continue;
            };
            let pairs: Vec<(&str, &str)> = names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.as_str(), caps.get(i + 1).map_or("", |c| c.as_str())))
                .collect();
            if let Some(r) = bind(&pairs, m, reg) {
                return Some((m.gupri.clone(), r));
            }
        }
    }
    None
}

/// Maps a sentence onto the first metamodel surface pattern that matches
/// and binds. Metamodels are tried in the order given; within one metamodel
/// longer patterns win. Returns `None` when nothing matches.
pub fn normalize_sentence(
    sentence: &str,
    metamodels: &[&RosettaMetamodel],
    reg: &Registries,
) -> Option<(Gupri, RosettaStatement)> {
    normalize_with(sentence, metamodels, reg)
}
