//! Element words and parahoric index lists from the command line.

use wstrata::{ExtElement, GroupContext, IndexSet, ParahoricType};

use crate::CliError;

/// Parses whitespace-separated tokens `t`, `t^-1`, `s0` ... `s12` (or `id`)
/// and multiplies them left to right.
pub fn parse_word(ctx: &GroupContext, text: &str) -> Result<ExtElement, CliError> {
    let g = ctx.rank();
    let mut x = ctx.identity();
    let mut any = false;
    for tok in text.split_whitespace() {
        any = true;
        let factor = match tok {
            "t" => *ctx.tau(),
            "t^-1" => ctx.tau().inverse(),
            "id" | "e" => ctx.identity(),
            _ => {
                let i: usize = tok
                    .strip_prefix('s')
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| CliError::Usage(format!("unrecognized token '{tok}' in word '{text}'")))?;
                if i > g {
                    return Err(CliError::Usage(format!("generator s{i} out of range for g = {g}")));
                }
                *ctx.generator(i).expect("index checked")
            }
        };
        x = x * factor;
    }
    if !any {
        return Err(CliError::Usage("empty word".into()));
    }
    Ok(x)
}

/// Parses a comma-separated list of node indices, e.g. `0,2`.
pub fn parse_j(g: usize, text: &str) -> Result<ParahoricType, CliError> {
    let mut nodes = IndexSet::EMPTY;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part
            .parse()
            .map_err(|_| CliError::Usage(format!("bad index '{part}' in J list '{text}'")))?;
        if i > g {
            return Err(CliError::Usage(format!("J index {i} out of range 0..={g}")));
        }
        nodes = nodes.with(i);
    }
    Ok(ParahoricType::new(nodes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        let ctx = GroupContext::new(2).unwrap();
        let s1t = parse_word(&ctx, "s1 t").unwrap();
        assert_eq!(s1t, *ctx.generator(1).unwrap() * *ctx.tau());
        assert_eq!(parse_word(&ctx, "t t^-1").unwrap(), ctx.identity());
        assert_eq!(parse_word(&ctx, " id ").unwrap(), ctx.identity());
        assert_eq!(ctx.reduced_word(&parse_word(&ctx, "t s0 s2 s1").unwrap()).to_string(), "t s0 s2 s1");
        for bad in ["s3", "x", "s", "s-1", "", "t^2"] {
            assert!(parse_word(&ctx, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn j_lists() {
        assert_eq!(parse_j(2, "0,2").unwrap().nodes(), [0, 2].into_iter().collect());
        assert_eq!(parse_j(2, "").unwrap().nodes(), IndexSet::EMPTY);
        assert!(parse_j(2, "0,3").is_err());
        assert!(parse_j(2, "a").is_err());
    }
}
