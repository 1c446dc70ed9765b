//! Number-word forms: cardinals and ordinals for 0–100 plus compositional
//! tens ("forty four" / "forty fourth"), with token-sequence parsing in the
//! other direction. Larger numbers only ever match digit-exact, so the
//! tables here stop at one hundred.

const UNITS: [&str; 20] = [
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
];

const UNIT_ORDINALS: [&str; 20] = [
    "zeroth",
    "first",
    "second",
    "third",
    "fourth",
    "fifth",
    "sixth",
    "seventh",
    "eighth",
    "ninth",
    "tenth",
    "eleventh",
    "twelfth",
    "thirteenth",
    "fourteenth",
    "fifteenth",
    "sixteenth",
    "seventeenth",
    "eighteenth",
    "nineteenth",
];

const TENS: [&str; 10] = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];

const TEN_ORDINALS: [&str; 10] = [
    "",
    "",
    "twentieth",
    "thirtieth",
    "fortieth",
    "fiftieth",
    "sixtieth",
    "seventieth",
    "eightieth",
    "ninetieth",
];

/// Cardinal word tokens for `n` in 0..=100 ("forty four"), or `None` outside
/// the supported range.
pub fn cardinal_words(n: u32) -> Option<Vec<String>> {
    match n {
        0..=19 => Some(vec![UNITS[n as usize].to_string()]),
        20..=99 => {
            let tens = TENS[(n / 10) as usize].to_string();
            if n % 10 == 0 {
                Some(vec![tens])
            } else {
                Some(vec![tens, UNITS[(n % 10) as usize].to_string()])
            }
        }
        100 => Some(vec!["one".to_string(), "hundred".to_string()]),
        _ => None,
    }
}

/// Ordinal word tokens for `n` in 0..=100 ("forty fourth"), or `None`
/// outside the supported range.
pub fn ordinal_words(n: u32) -> Option<Vec<String>> {
    match n {
        0..=19 => Some(vec![UNIT_ORDINALS[n as usize].to_string()]),
        20..=99 => {
            if n % 10 == 0 {
                Some(vec![TEN_ORDINALS[(n / 10) as usize].to_string()])
            } else {
                Some(vec![
                    TENS[(n / 10) as usize].to_string(),
                    UNIT_ORDINALS[(n % 10) as usize].to_string(),
                ])
            }
        }
        100 => Some(vec!["one".to_string(), "hundredth".to_string()]),
        _ => None,
    }
}

/// Ordinal rendering of an arbitrary non-negative integer in digit form
/// ("101st", "42nd"). Used when a replacement number falls outside the
/// word-form range.
pub fn digit_ordinal(n: u64) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

fn unit_value(token: &str) -> Option<u32> {
    UNITS.iter().position(|w| *w == token).map(|i| i as u32)
}

fn unit_ordinal_value(token: &str) -> Option<u32> {
    UNIT_ORDINALS
        .iter()
        .position(|w| *w == token)
        .map(|i| i as u32)
}

fn tens_value(token: &str) -> Option<u32> {
    TENS.iter()
        .position(|w| !w.is_empty() && *w == token)
        .map(|i| i as u32 * 10)
}

fn tens_ordinal_value(token: &str) -> Option<u32> {
    TEN_ORDINALS
        .iter()
        .position(|w| !w.is_empty() && *w == token)
        .map(|i| i as u32 * 10)
}

/// Longest cardinal word sequence starting at `tokens[0]`. Returns the value
/// and the number of tokens consumed.
pub fn parse_cardinal(tokens: &[&str]) -> Option<(u32, usize)> {
    let first = *tokens.first()?;
    if first == "one" && tokens.get(1).copied() == Some("hundred") {
        return Some((100, 2));
    }
    if let Some(t) = tens_value(first) {
        if let Some(u) = tokens.get(1).and_then(|t| unit_value(t)).filter(|u| *u > 0 && *u < 10) {
            return Some((t + u, 2));
        }
        return Some((t, 1));
    }
    unit_value(first).map(|v| (v, 1))
}

/// Longest ordinal word sequence starting at `tokens[0]` ("forty fourth" →
/// 44). Digit-ordinal tokens ("44th") are accepted too. Returns the value
/// and the number of tokens consumed.
pub fn parse_ordinal(tokens: &[&str]) -> Option<(u32, usize)> {
    let first = *tokens.first()?;
    if first == "one" && tokens.get(1).copied() == Some("hundredth") {
        return Some((100, 2));
    }
    if let Some(t) = tens_value(first) {
        if let Some(u) = tokens
            .get(1)
            .and_then(|t| unit_ordinal_value(t))
            .filter(|u| *u > 0 && *u < 10)
        {
            return Some((t + u, 2));
        }
    }
    if let Some(t) = tens_ordinal_value(first) {
        return Some((t, 1));
    }
    if let Some(u) = unit_ordinal_value(first) {
        return Some((u, 1));
    }
    // Digit form with an ordinal suffix: "44th", "2nd".
    if let Some(stripped) = first
        .strip_suffix("st")
        .or_else(|| first.strip_suffix("nd"))
        .or_else(|| first.strip_suffix("rd"))
        .or_else(|| first.strip_suffix("th"))
    {
        if !stripped.is_empty() && stripped.chars().all(|c| c.is_ascii_digit()) {
            if let Ok(v) = stripped.parse::<u32>() {
                return Some((v, 1));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forty_fourth_round_trips() {
        assert_eq!(ordinal_words(44).unwrap(), vec!["forty", "fourth"]);
        assert_eq!(parse_ordinal(&["forty", "fourth"]), Some((44, 2)));
    }

    #[test]
    fn cardinal_round_trip_exhaustive() {
        for n in 0..=100u32 {
            let words = cardinal_words(n).unwrap();
            let toks: Vec<&str> = words.iter().map(String::as_str).collect();
            assert_eq!(parse_cardinal(&toks), Some((n, toks.len())), "n={n}");
        }
    }

    #[test]
    fn ordinal_round_trip_exhaustive() {
        for n in 0..=100u32 {
            let words = ordinal_words(n).unwrap();
            let toks: Vec<&str> = words.iter().map(String::as_str).collect();
            assert_eq!(parse_ordinal(&toks), Some((n, toks.len())), "n={n}");
        }
    }

    #[test]
    fn digit_ordinals() {
        assert_eq!(parse_ordinal(&["44th"]), Some((44, 1)));
        assert_eq!(parse_ordinal(&["2nd"]), Some((2, 1)));
        assert_eq!(digit_ordinal(101), "101st");
        assert_eq!(digit_ordinal(112), "112th");
        assert_eq!(digit_ordinal(43), "43rd");
    }

    #[test]
    fn out_of_range_numbers_have_no_word_form() {
        assert_eq!(cardinal_words(101), None);
        assert_eq!(ordinal_words(298), None);
        assert_eq!(parse_cardinal(&["hundred"]), None);
    }
}
