//! Parsing of numeric command-line values such as `1e7`, `10^6` or `1_000_000`.

/// Parse a non-negative integer, accepting scientific (`1e7`, `2.5e3`) and
/// power (`10^6`) notation as long as the value is an exact integer.
pub fn parse_count(text: &str) -> Result<u64, String> {
    let s: String = text.trim().chars().filter(|&c| c != '_').collect();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.parse().map_err(|_| format!("bad base in {text:?}"))?;
        let exp: u32 = exp
            .parse()
            .map_err(|_| format!("bad exponent in {text:?}"))?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| format!("{text} does not fit in 64 bits"));
    }
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let exp: u32 = exp
            .parse()
            .map_err(|_| format!("bad exponent in {text:?}"))?;
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if frac_part.len() as u32 > exp {
            return Err(format!("{text} is not an integer"));
        }
        let digits = format!("{int_part}{frac_part}");
        let base: u64 = digits
            .parse()
            .map_err(|_| format!("bad mantissa in {text:?}"))?;
        return 10u64
            .checked_pow(exp - frac_part.len() as u32)
            .and_then(|scale| base.checked_mul(scale))
            .ok_or_else(|| format!("{text} does not fit in 64 bits"));
    }
    s.parse()
        .map_err(|_| format!("{text:?} is not a non-negative integer"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn notations() {
        assert_eq!(parse_count("1e7"), Ok(10_000_000));
        assert_eq!(parse_count("2.5e3"), Ok(2500));
        assert_eq!(parse_count("10^6"), Ok(1_000_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert_eq!(parse_count("112999"), Ok(112_999));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("1.25e1").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("1e30").is_err());
    }
}
