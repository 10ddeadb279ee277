//! Reference metamodel IR and crosswalks between content forms.
//!
//! Every conversion pivots through the rosetta form: a manifestation is first
//! lifted into a [`RosettaStatement`] under the unit's metamodel, then lowered
//! into the target form. There are no direct graph/tabular converters.

mod convert;
mod metamodel;
mod normalize;
mod render;

pub use convert::{crosswalk, from_rosetta, statement_node, to_rosetta, LOSSY_TEXT_NOTE};
pub use metamodel::{
    parse_template, GraphBinding, GraphSlotBinding, RosettaMetamodel, Segment, SlotDef, SlotKind,
    TabularBinding, TabularColumn, SUBJECT_PLACEHOLDER,
};
pub use normalize::normalize_sentence;
pub use render::{
    render, render_rosetta, DisplayEdge, DisplayGraph, DisplayNode, RenderMode, RenderOutput,
    Rendering, TableView,
};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{RosettaStatement, SlotValue};

/// Checks that `slots` line up with the metamodel's slot kinds.
pub fn check_bindings(metamodel: &RosettaMetamodel, slots: &[SlotValue]) -> Result<()> {
    if slots.len() != metamodel.slots.len() {
        return Err(Error::Binding(format!(
            "{} expects {} slot bindings, got {}",
            metamodel.name,
            metamodel.slots.len(),
            slots.len()
        )));
    }
    for (def, value) in metamodel.slots.iter().zip(slots) {
        let ok = match (&def.kind, value) {
            (SlotKind::Resource, SlotValue::Resource { .. }) => true,
            (SlotKind::Literal { datatype }, SlotValue::Literal { value }) => {
                value.datatype == *datatype
            }
            (SlotKind::Quantity { .. }, SlotValue::Quantity { .. }) => true,
            _ => false,
        };
        if !ok {
            return Err(Error::Binding(format!(
                "slot `{}` of {} expects {}, got {}",
                def.name,
                metamodel.name,
                describe_kind(&def.kind),
                describe_value(value)
            )));
        }
    }
    Ok(())
}

fn describe_kind(k: &SlotKind) -> String {
    match k {
        SlotKind::Resource => "a resource".into(),
        SlotKind::Literal { datatype } => format!("a {} literal", datatype.curie()),
        SlotKind::Quantity { .. } => "a quantity".into(),
    }
}

fn describe_value(v: &SlotValue) -> String {
    match v {
        SlotValue::Resource { .. } => "a resource".into(),
        SlotValue::Literal { value } => format!("a {} literal", value.datatype.curie()),
        SlotValue::Quantity { .. } => "a quantity".into(),
    }
}

/// Builds a rosetta manifestation after checking binding kinds.
pub fn instantiate_statement(
    metamodel: &RosettaMetamodel,
    subject: Gupri,
    slots: Vec<SlotValue>,
) -> Result<RosettaStatement> {
    check_bindings(metamodel, &slots)?;
    Ok(RosettaStatement {
        metamodel: metamodel.gupri.clone(),
        subject,
        slots,
    })
}
