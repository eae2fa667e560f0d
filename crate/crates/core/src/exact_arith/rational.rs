use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type ExactRational = BigRational;

/// Parse `"a"` or `"a/b"`. Whitespace around either part is ignored.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::invalid(format!("malformed rational {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::invalid(format!("malformed rational {text:?}")))?;
    if den.is_zero() {
        return Err(Error::invalid(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Parse a comma-separated list of rationals. Errors name the 1-based
/// position of the offending entry.
pub fn parse_rational_list(text: &str) -> Result<Vec<ExactRational>> {
    if text.trim().is_empty() {
        return Err(Error::invalid("empty rational list"));
    }
    text.split(',')
        .enumerate()
        .map(|(i, entry)| {
            parse_rational(entry).map_err(|e| match e {
                Error::InvalidInput(msg) => {
                    Error::invalid(format!("entry {} of {text:?}: {msg}", i + 1))
                }
                other => other,
            })
        })
        .collect()
}

/// Format as `"a/b"`, including integers (`"3/1"`), so that every exported
/// rational has the same shape.
pub fn format_ratio(q: &ExactRational) -> String {
    if q.denom().is_one() {
        format!("{}/1", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_lists() {
        assert_eq!(parse_rational_list("0,1").unwrap(), vec![q(0, 1), q(1, 1)]);
        assert_eq!(
            parse_rational_list("1/2,3/2").unwrap(),
            vec![q(1, 2), q(3, 2)]
        );
        assert_eq!(parse_rational_list("-2, 0 ,4/6").unwrap()[2], q(2, 3));
    }

    #[test]
    fn rejects_zero_denominator_with_position() {
        let err = parse_rational_list("1,1/0").unwrap_err().to_string();
        assert!(err.contains("entry 2"), "{err}");
        assert!(parse_rational("x").is_err());
        assert!(parse_rational_list("").is_err());
    }

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(format_ratio(&q(3, 1)), "3/1");
        assert_eq!(format_ratio(&q(-2, 6)), "-1/3");
        assert_eq!(format_ratio(&q(0, 5)), "0/1");
    }
}
