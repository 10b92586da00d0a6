//! The source-term grammar: semicolon-separated `c,p,q,r` quadruples of
//! decimal reals, each meaning `c * t^p * x^q * y^r`. The empty string is
//! the zero function.

use fracheat::{PolySum3, Result};

/// Parses the grammar into the raw term list, preserving order.
pub fn parse_terms(input: &str) -> std::result::Result<Vec<(f64, f64, f64, f64)>, String> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    for (idx, chunk) in trimmed.split(';').enumerate() {
        let parts: Vec<&str> = chunk.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!(
                "term {idx} ({chunk:?}): expected 4 comma-separated values, got {}",
                parts.len()
            ));
        }
        let mut vals = [0.0f64; 4];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| format!("term {idx} ({chunk:?}): {e}"))?;
        }
        terms.push((vals[0], vals[1], vals[2], vals[3]));
    }
    Ok(terms)
}

/// Serializes a raw term list back into the grammar.
pub fn serialize_terms(terms: &[(f64, f64, f64, f64)]) -> String {
    terms
        .iter()
        .map(|(c, p, q, r)| format!("{c},{p},{q},{r}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Parses and validates into a canonical polynomial sum.
pub fn parse_polysum(input: &str) -> std::result::Result<PolySum3<f64>, String> {
    let terms = parse_terms(input)?;
    let built: Result<PolySum3<f64>> = PolySum3::new(&terms);
    built.map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_empty_is_zero() {
        assert!(parse_terms("").unwrap().is_empty());
        assert!(parse_polysum("  ").unwrap().is_zero());
    }

    #[test]
    fn parse_example_terms() {
        let terms = parse_terms("2,1,3,3;-6,2,1,3;-6,2,3,1").unwrap();
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[1], (-6.0, 2.0, 1.0, 3.0));
    }

    #[test]
    fn round_trip_identity() {
        let input = "2,1,3,3;-6,2,1,3;-6,2,3,1";
        let terms = parse_terms(input).unwrap();
        assert_eq!(serialize_terms(&terms), input);
        let fractional = "0.5,0.25,1.5,0;-1.25,2,0,3";
        let terms = parse_terms(fractional).unwrap();
        assert_eq!(serialize_terms(&terms), fractional);
    }

    #[test]
    fn malformed_rejected() {
        assert!(parse_terms("1,2,3").is_err());
        assert!(parse_terms("1,2,3,x").is_err());
        assert!(parse_polysum("1,-1,0,0").is_err());
    }
}
