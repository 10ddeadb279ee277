use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Datatype {
    #[serde(rename = "xsd:string")]
    String,
    #[serde(rename = "xsd:decimal")]
    Decimal,
    #[serde(rename = "xsd:integer")]
    Integer,
    #[serde(rename = "xsd:boolean")]
    Boolean,
    #[serde(rename = "xsd:dateTime")]
    DateTime,
}

impl Datatype {
    pub const ALL: [Datatype; 5] = [
        Datatype::String,
        Datatype::Decimal,
        Datatype::Integer,
        Datatype::Boolean,
        Datatype::DateTime,
    ];

    pub fn curie(self) -> &'static str {
        match self {
            Datatype::String => "xsd:string",
            Datatype::Decimal => "xsd:decimal",
            Datatype::Integer => "xsd:integer",
            Datatype::Boolean => "xsd:boolean",
            Datatype::DateTime => "xsd:dateTime",
        }
    }

    pub fn from_curie(curie: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.curie() == curie)
    }

    pub fn accepts(self, lexical: &str) -> bool {
        match self {
            Datatype::String => true,
            Datatype::Decimal => Decimal::parse(lexical).is_ok(),
            Datatype::Integer => {
                let digits = lexical.strip_prefix('-').unwrap_or(lexical);
                !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
            }
            Datatype::Boolean => matches!(lexical, "true" | "false"),
            Datatype::DateTime => chrono::DateTime::parse_from_rfc3339(lexical).is_ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub lexical: String,
    pub datatype: Datatype,
}

impl Literal {
    pub fn new(lexical: impl Into<String>, datatype: Datatype) -> Result<Self> {
        let lexical = lexical.into();
        if !datatype.accepts(&lexical) {
            return Err(Error::Validation(format!(
                "`{lexical}` is not a valid {}",
                datatype.curie()
            )));
        }
        Ok(Self { lexical, datatype })
    }

    pub fn string(s: impl Into<String>) -> Self {
        Self {
            lexical: s.into(),
            datatype: Datatype::String,
        }
    }
}

/// A decimal number kept in normalized lexical form (`24.76`, `37`, `-0.5`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decimal(String);

impl Decimal {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("`{text}` is not a decimal number"));
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if int.is_empty()
            || !all_digits(int)
            || !all_digits(frac)
            || (body.contains('.') && frac.is_empty())
        {
            return Err(bad());
        }
        let int = int.trim_start_matches('0');
        let int = if int.is_empty() { "0" } else { int };
        let frac = frac.trim_end_matches('0');
        let mut out = String::new();
        if negative && !(int == "0" && frac.is_empty()) {
            out.push('-');
        }
        out.push_str(int);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        Ok(Decimal(out))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.parse().expect("normalized decimals parse as f64")
    }

    /// Human rendering with at most six significant digits and no grouping.
    pub fn display_6sig(&self) -> String {
        let value = self.to_f64();
        if value == 0.0 {
            return "0".to_string();
        }
        let rounded: f64 = format!("{value:.5e}")
            .parse()
            .expect("scientific form parses");
        let plain = format!("{rounded}");
        Decimal::parse(&plain).map(|d| d.0).unwrap_or(plain)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Decimal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Decimal::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        for (input, want) in [
            ("24.76", "24.76"),
            ("24.760", "24.76"),
            ("037", "37"),
            ("37.0", "37"),
            ("-0.0", "0"),
            ("+5", "5"),
            ("0.5", "0.5"),
        ] {
            assert_eq!(Decimal::parse(input).unwrap().as_str(), want, "{input}");
        }
        for bad in ["", ".5", "5.", "1e3", "abc", "1,000"] {
            assert!(Decimal::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn six_significant_digits() {
        let cases = [
            ("24.76", "24.76"),
            ("37", "37"),
            ("1234567", "1234570"),
            ("0.000123456789", "0.000123457"),
            ("3.14159265", "3.14159"),
        ];
        for (input, want) in cases {
            assert_eq!(
                Decimal::parse(input).unwrap().display_6sig(),
                want,
                "{input}"
            );
        }
    }

    #[test]
    fn datatype_checks() {
        assert!(Literal::new("true", Datatype::Boolean).is_ok());
        assert!(Literal::new("yes", Datatype::Boolean).is_err());
        assert!(Literal::new("-12", Datatype::Integer).is_ok());
        assert!(Literal::new("1.5", Datatype::Integer).is_err());
        assert!(Literal::new("2024-01-01T00:00:00Z", Datatype::DateTime).is_ok());
    }
}
