//! Value parsers shared by the subcommands.

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use treeshade::exact::parse_rational;
use treeshade::setfam::{Family, SubsetMask};
use treeshade::trees::BranchingSpec;

/// `1,3,4` (1-based); empty string or `{}` for the empty set.
pub fn parse_set(n: u32, s: &str) -> Result<SubsetMask> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let elements = parse_list::<u32>(inner)?;
    Ok(SubsetMask::from_elements(n, &elements)?)
}

/// Members separated by `;`, elements by `,`: `1,2;1,3;2,3`.
pub fn parse_family(n: u32, s: &str) -> Result<Family> {
    let members = s
        .split(';')
        .filter(|m| !m.trim().is_empty())
        .map(|m| parse_set(n, m))
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("family {s:?} over [{n}]"))?;
    let k = members.first().map_or(0, |m| m.len());
    Ok(Family::new(n, k, members)?)
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|e| anyhow::anyhow!("bad list entry {x:?}: {e}")))
        .collect()
}

/// `a..b` or `a..=b` (both inclusive), or a single value.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let lo: u64 = lo.parse().with_context(|| format!("range {s:?}"))?;
    let hi: u64 = hi.parse().with_context(|| format!("range {s:?}"))?;
    if lo > hi {
        bail!("empty range {s:?}");
    }
    Ok((lo, hi))
}

pub fn rational(s: &str) -> Result<BigRational> {
    Ok(parse_rational(s)?)
}

/// Branching bounds from a comma list; the last entry repeats out to `depth`.
pub fn branching(f: &[u32], depth: usize) -> Result<BranchingSpec> {
    let Some(&last) = f.last() else {
        bail!("--f needs at least one branching bound");
    };
    let mut bounds = f.to_vec();
    bounds.resize(depth.max(f.len()), last);
    Ok(BranchingSpec::new(bounds)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values() {
        assert_eq!(parse_set(4, "{1,3}").unwrap().elements(), vec![1, 3]);
        assert!(parse_set(4, "").unwrap().is_empty());
        assert!(parse_set(3, "4").is_err());
        let f = parse_family(4, "1,2; 1,3;2,3").unwrap();
        assert_eq!((f.len(), f.uniformity()), (3, 2));
        assert!(parse_family(4, "1,2;1").is_err());
        assert_eq!(parse_range("2..=5").unwrap(), (2, 5));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("5..2").is_err());
        assert_eq!(branching(&[2], 3).unwrap().bounds(), &[2, 2, 2]);
        assert_eq!(branching(&[4, 3], 1).unwrap().bounds(), &[4, 3]);
    }
}
