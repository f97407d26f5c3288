//! Periodic assignment of coins to lattice sites.
//!
//! A [`CoinLayout`] stores one period of coin slots together with an anchor;
//! site `x` uses `pattern[(x + anchor).rem_euclid(N)]`. The Euclidean
//! remainder keeps `x ≡ 0 (mod N)` true at x = −N, −2N, … as well.
//!
//! Slots are resolved through a [`CoinTable`]: `C0` is the coin at sites
//! without potential (identity by default), `Cp` the coin at sites with
//! potential (Hadamard by default).

use std::fmt;
use std::str::FromStr;

use crate::coin::{CoinOperator, CoinParams, DEFAULT_UNITARY_TOL};
use crate::{Result, WalkError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoinSlot {
    /// No potential.
    C0,
    /// Potential present.
    Cp,
    /// Index into [`CoinTable::custom`].
    Custom(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoinTable {
    pub c0: CoinOperator,
    pub cp: CoinOperator,
    pub custom: Vec<CoinOperator>,
}

impl Default for CoinTable {
    fn default() -> Self {
        Self::new(CoinOperator::identity(), CoinOperator::hadamard())
    }
}

impl CoinTable {
    pub fn new(c0: CoinOperator, cp: CoinOperator) -> Self {
        Self {
            c0,
            cp,
            custom: Vec::new(),
        }
    }

    pub fn with_custom(mut self, custom: Vec<CoinOperator>) -> Self {
        self.custom = custom;
        self
    }

    /// Exchanges the roles of the two named coins.
    pub fn swapped(&self) -> Self {
        Self {
            c0: self.cp,
            cp: self.c0,
            custom: self.custom.clone(),
        }
    }

    pub fn resolve(&self, slot: CoinSlot) -> Result<&CoinOperator> {
        match slot {
            CoinSlot::C0 => Ok(&self.c0),
            CoinSlot::Cp => Ok(&self.cp),
            CoinSlot::Custom(index) => self.custom.get(index).ok_or(WalkError::MissingCoin {
                index,
                available: self.custom.len(),
            }),
        }
    }

    /// True when every coin in the table passes the unitarity check.
    pub fn is_unitary(&self, tol: f64) -> bool {
        std::iter::once(&self.c0)
            .chain(std::iter::once(&self.cp))
            .chain(self.custom.iter())
            .all(|c| c.is_unitary(tol))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoinLayout {
    pattern: Vec<CoinSlot>,
    anchor: usize,
}

impl CoinLayout {
    /// Builds a layout from one period of slots. `anchor` may be any integer
    /// and is reduced modulo the period.
    pub fn from_pattern(pattern: Vec<CoinSlot>, anchor: i64) -> Result<Self> {
        if pattern.is_empty() {
            return Err(WalkError::EmptyPattern);
        }
        let anchor = anchor.rem_euclid(pattern.len() as i64) as usize;
        Ok(Self { pattern, anchor })
    }

    /// Single-slot layout: the same coin at every site.
    pub fn uniform(slot: CoinSlot) -> Self {
        Self {
            pattern: vec![slot],
            anchor: 0,
        }
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn pattern(&self) -> &[CoinSlot] {
        &self.pattern
    }

    #[inline]
    pub fn slot_at(&self, x: i64) -> CoinSlot {
        let n = self.pattern.len() as i64;
        self.pattern[(x + self.anchor as i64).rem_euclid(n) as usize]
    }

    pub fn coin_at<'t>(&self, table: &'t CoinTable, x: i64) -> Result<&'t CoinOperator> {
        table.resolve(self.slot_at(x))
    }

    /// Fails if the layout references a custom coin the table does not hold.
    pub fn check_table(&self, table: &CoinTable) -> Result<()> {
        self.pattern
            .iter()
            .try_for_each(|&s| table.resolve(s).map(drop))
    }

    /// Same layout with C0 and Cp exchanged at every site.
    pub fn dual(&self) -> Self {
        let pattern = self
            .pattern
            .iter()
            .map(|s| match s {
                CoinSlot::C0 => CoinSlot::Cp,
                CoinSlot::Cp => CoinSlot::C0,
                other => *other,
            })
            .collect();
        Self {
            pattern,
            anchor: self.anchor,
        }
    }
}

/// The six two-coin case families.
///
/// Families I and II are parameterised by the period N; family III by the
/// block length q, with period 2q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseFamily {
    /// Cp at x ≡ 0 (mod N), C0 elsewhere.
    IA,
    /// C0 at x ≡ 0 (mod N), Cp elsewhere.
    IB,
    /// C0 at x ≡ N/2 (mod N), Cp elsewhere. N even.
    IIA,
    /// Cp at x ≡ N/2 (mod N), C0 elsewhere. N even.
    IIB,
    /// Cp on the q-site block centred on the origin, C0 on the other q sites. q odd.
    IIIA,
    /// C0 on the centred block, Cp on the other q sites. q odd.
    IIIB,
}

impl CaseFamily {
    pub const ALL: [CaseFamily; 6] = [
        CaseFamily::IA,
        CaseFamily::IB,
        CaseFamily::IIA,
        CaseFamily::IIB,
        CaseFamily::IIIA,
        CaseFamily::IIIB,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseFamily::IA => "IA",
            CaseFamily::IB => "IB",
            CaseFamily::IIA => "IIA",
            CaseFamily::IIB => "IIB",
            CaseFamily::IIIA => "IIIA",
            CaseFamily::IIIB => "IIIB",
        }
    }

    /// The family obtained by exchanging C0 and Cp.
    pub fn dual(&self) -> Self {
        match self {
            CaseFamily::IA => CaseFamily::IB,
            CaseFamily::IB => CaseFamily::IA,
            CaseFamily::IIA => CaseFamily::IIB,
            CaseFamily::IIB => CaseFamily::IIA,
            CaseFamily::IIIA => CaseFamily::IIIB,
            CaseFamily::IIIB => CaseFamily::IIIA,
        }
    }

    /// Whether the family is parameterised by the block length q rather than N.
    pub fn uses_block_length(&self) -> bool {
        matches!(self, CaseFamily::IIIA | CaseFamily::IIIB)
    }
}

impl fmt::Display for CaseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CaseFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown case family `{s}` (expected IA, IB, IIA, IIB, IIIA or IIIB)")
            })
    }
}

/// A case family together with its N (families I, II) or q (family III).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseSpec {
    family: CaseFamily,
    param: u32,
}

impl CaseSpec {
    pub fn new(family: CaseFamily, param: u32) -> Result<Self> {
        let invalid = |constraint| {
            Err(WalkError::InvalidCase {
                family: family.name(),
                constraint,
                value: param,
            })
        };
        match family {
            CaseFamily::IA | CaseFamily::IB if param < 2 => invalid("period N must be at least 2"),
            CaseFamily::IIA | CaseFamily::IIB if param < 2 || !param.is_multiple_of(2) => {
                invalid("period N must be even and at least 2")
            }
            CaseFamily::IIIA | CaseFamily::IIIB if param < 3 || param.is_multiple_of(2) => {
                invalid("block length q must be odd and at least 3")
            }
            _ => Ok(Self { family, param }),
        }
    }

    pub fn family(&self) -> CaseFamily {
        self.family
    }

    /// N for families I and II, q for family III.
    pub fn param(&self) -> u32 {
        self.param
    }

    /// Full spatial period.
    pub fn period(&self) -> usize {
        if self.family.uses_block_length() {
            2 * self.param as usize
        } else {
            self.param as usize
        }
    }

    /// Case layout with anchor 0, so `pattern[r]` is the slot at every
    /// x ≡ r (mod period).
    pub fn layout(&self) -> CoinLayout {
        use CoinSlot::{Cp, C0};
        let n = self.period();
        let half = n / 2;
        let q = self.param as usize;
        // Family III: residue r lies in the block centred on the origin iff
        // (r + (q−1)/2) mod 2q < q.
        let in_centre_block = |r: usize| (r + (q - 1) / 2) % n < q;
        let pattern = (0..n)
            .map(|r| match self.family {
                CaseFamily::IA => {
                    if r == 0 {
                        Cp
                    } else {
                        C0
                    }
                }
                CaseFamily::IB => {
                    if r == 0 {
                        C0
                    } else {
                        Cp
                    }
                }
                CaseFamily::IIA => {
                    if r == half {
                        C0
                    } else {
                        Cp
                    }
                }
                CaseFamily::IIB => {
                    if r == half {
                        Cp
                    } else {
                        C0
                    }
                }
                CaseFamily::IIIA => {
                    if in_centre_block(r) {
                        Cp
                    } else {
                        C0
                    }
                }
                CaseFamily::IIIB => {
                    if in_centre_block(r) {
                        C0
                    } else {
                        Cp
                    }
                }
            })
            .collect();
        CoinLayout { pattern, anchor: 0 }
    }

    /// Short label such as `IB_N7` or `IIIB_q7`.
    pub fn label(&self) -> String {
        let p = if self.family.uses_block_length() {
            "q"
        } else {
            "N"
        };
        format!("{}_{}{}", self.family, p, self.param)
    }
}

impl fmt::Display for CaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.family.uses_block_length() {
            "q"
        } else {
            "N"
        };
        write!(f, "{} ({}={})", self.family, p, self.param)
    }
}

/// Result of parsing a compact coin pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedPattern {
    pub layout: CoinLayout,
    /// Coins given inline as `G<ρ,θ,φ>`, referenced by [`CoinSlot::Custom`].
    pub custom: Vec<CoinOperator>,
}

/// Parses the compact block notation, e.g. `H1I13` for one Cp site followed
/// by thirteen C0 sites.
///
/// Each block is a coin letter followed by a positive count: `H` (the Cp
/// slot), `I` (the C0 slot), or `G<rho,theta,phi>` / `G⟨rho,theta,phi⟩` for an
/// inline general coin. When the first block has odd length it is centred on
/// the origin; otherwise it starts at x = 0.
pub fn parse_pattern(input: &str) -> Result<ParsedPattern> {
    let syntax = |reason: String| WalkError::PatternSyntax {
        input: input.to_string(),
        reason,
    };
    let mut chars = input.trim().chars().peekable();
    let mut blocks: Vec<(CoinSlot, usize)> = Vec::new();
    let mut custom = Vec::new();

    while let Some(letter) = chars.next() {
        let slot = match letter.to_ascii_uppercase() {
            'H' => CoinSlot::Cp,
            'I' => CoinSlot::C0,
            'G' => {
                let close = match chars.next() {
                    Some('<') => '>',
                    Some('⟨') => '⟩',
                    _ => return Err(syntax("`G` must be followed by <rho,theta,phi>".into())),
                };
                let body: String = chars.by_ref().take_while(|&c| c != close).collect();
                let values = body
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| syntax(format!("bad coin parameter in `{body}`: {e}")))?;
                let [rho, theta, phi] = values[..] else {
                    return Err(syntax(format!(
                        "expected three coin parameters, got `{body}`"
                    )));
                };
                let coin = CoinOperator::general(CoinParams::new(rho, theta, phi)?);
                debug_assert!(coin.is_unitary(DEFAULT_UNITARY_TOL));
                custom.push(coin);
                CoinSlot::Custom(custom.len() - 1)
            }
            other => return Err(syntax(format!("unexpected character `{other}`"))),
        };
        let mut digits = String::new();
        while let Some(d) = chars.next_if(char::is_ascii_digit) {
            digits.push(d);
        }
        let count: usize = digits
            .parse()
            .map_err(|_| syntax(format!("block `{letter}` needs a positive count")))?;
        if count == 0 {
            return Err(syntax(format!("block `{letter}` has zero length")));
        }
        blocks.push((slot, count));
    }

    let first = blocks.first().map(|b| b.1).ok_or(WalkError::EmptyPattern)?;
    let anchor = if first % 2 == 1 { (first - 1) / 2 } else { 0 };
    let pattern = blocks
        .into_iter()
        .flat_map(|(slot, count)| std::iter::repeat_n(slot, count))
        .collect();
    Ok(ParsedPattern {
        layout: CoinLayout::from_pattern(pattern, anchor as i64)?,
        custom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(f: CaseFamily, p: u32) -> CaseSpec {
        CaseSpec::new(f, p).unwrap()
    }

    #[test]
    fn case_ia_has_hadamard_on_multiples_of_n() {
        let table = CoinTable::default();
        let layout = spec(CaseFamily::IA, 14).layout();
        let h = CoinOperator::hadamard();
        let id = CoinOperator::identity();
        assert_eq!(*layout.coin_at(&table, 0).unwrap(), h);
        assert_eq!(*layout.coin_at(&table, 14).unwrap(), h);
        assert_eq!(*layout.coin_at(&table, -14).unwrap(), h);
        assert_eq!(*layout.coin_at(&table, 1).unwrap(), id);
    }

    #[test]
    fn case_iia_has_identity_at_half_period() {
        let table = CoinTable::default();
        let layout = spec(CaseFamily::IIA, 14).layout();
        assert_eq!(
            *layout.coin_at(&table, 7).unwrap(),
            CoinOperator::identity()
        );
        assert_eq!(
            *layout.coin_at(&table, -7).unwrap(),
            CoinOperator::identity()
        );
        assert_eq!(
            *layout.coin_at(&table, 0).unwrap(),
            CoinOperator::hadamard()
        );
    }

    #[test]
    fn single_slot_layout_is_uniform() {
        let table = CoinTable::default();
        let layout = CoinLayout::from_pattern(vec![CoinSlot::Cp], 0).unwrap();
        for x in -50..=50 {
            assert_eq!(
                *layout.coin_at(&table, x).unwrap(),
                CoinOperator::hadamard()
            );
        }
        let layout = CoinLayout::from_pattern(vec![CoinSlot::C0], 0).unwrap();
        for x in -50..=50 {
            assert_eq!(
                *layout.coin_at(&table, x).unwrap(),
                CoinOperator::identity()
            );
        }
    }

    #[test]
    fn case_ib_n3() {
        let layout = spec(CaseFamily::IB, 3).layout();
        for x in -30..=30i64 {
            let expect = if x % 3 == 0 {
                CoinSlot::C0
            } else {
                CoinSlot::Cp
            };
            assert_eq!(layout.slot_at(x), expect, "x = {x}");
        }
    }

    #[test]
    fn case_iiib_q7_blocks() {
        let layout = spec(CaseFamily::IIIB, 7).layout();
        assert_eq!(layout.period(), 14);
        for x in -3..=3 {
            for k in -3..=3i64 {
                assert_eq!(layout.slot_at(x + 14 * k), CoinSlot::C0);
            }
        }
        for x in 4..=10 {
            assert_eq!(layout.slot_at(x), CoinSlot::Cp);
        }
    }

    #[test]
    fn case_iiia_q3_residues() {
        // Enumerated by hand: the centred block {−1, 0, 1} is residues {5, 0, 1} mod 6.
        let layout = spec(CaseFamily::IIIA, 3).layout();
        let expect = [
            CoinSlot::Cp, // 0
            CoinSlot::Cp, // 1
            CoinSlot::C0, // 2
            CoinSlot::C0, // 3
            CoinSlot::C0, // 4
            CoinSlot::Cp, // 5
        ];
        for x in -30..=30i64 {
            assert_eq!(
                layout.slot_at(x),
                expect[x.rem_euclid(6) as usize],
                "x = {x}"
            );
        }
    }

    #[test]
    fn explicit_pattern_reproduces_case_ia() {
        let manual =
            CoinLayout::from_pattern(vec![CoinSlot::Cp, CoinSlot::C0, CoinSlot::C0], 0).unwrap();
        let case = spec(CaseFamily::IA, 3).layout();
        for x in -20..=20 {
            assert_eq!(manual.slot_at(x), case.slot_at(x));
        }
    }

    #[test]
    fn anchor_is_reduced() {
        let l =
            CoinLayout::from_pattern(vec![CoinSlot::Cp, CoinSlot::C0, CoinSlot::C0], -4).unwrap();
        assert_eq!(l.anchor(), 2);
        assert_eq!(l.slot_at(1), CoinSlot::Cp);
    }

    #[test]
    fn empty_pattern_is_rejected() {
        assert_eq!(
            CoinLayout::from_pattern(vec![], 0),
            Err(WalkError::EmptyPattern)
        );
        assert_eq!(parse_pattern(""), Err(WalkError::EmptyPattern));
    }

    #[test]
    fn invalid_case_parameters_name_the_constraint() {
        let e = CaseSpec::new(CaseFamily::IIA, 7).unwrap_err();
        assert!(e.to_string().contains("even"), "{e}");
        let e = CaseSpec::new(CaseFamily::IIIB, 4).unwrap_err();
        assert!(e.to_string().contains("odd"), "{e}");
        assert!(CaseSpec::new(CaseFamily::IA, 1).is_err());
        assert!(CaseSpec::new(CaseFamily::IIIA, 1).is_err());
        assert!(CaseSpec::new(CaseFamily::IB, 2).is_ok());
    }

    #[test]
    fn family_names_round_trip() {
        for f in CaseFamily::ALL {
            assert_eq!(f.name().parse::<CaseFamily>().unwrap(), f);
            assert_eq!(f.dual().dual(), f);
        }
        assert_eq!("iiib".parse::<CaseFamily>().unwrap(), CaseFamily::IIIB);
        assert!("IV".parse::<CaseFamily>().is_err());
    }

    #[test]
    fn pattern_strings_match_case_constructors() {
        let cases = [
            ("H1I13", spec(CaseFamily::IA, 14)),
            ("I1H13", spec(CaseFamily::IB, 14)),
            ("H13I1", spec(CaseFamily::IIA, 14)),
            ("I13H1", spec(CaseFamily::IIB, 14)),
            ("H19I19", spec(CaseFamily::IIIA, 19)),
            ("I7H7", spec(CaseFamily::IIIB, 7)),
        ];
        for (text, case) in cases {
            let parsed = parse_pattern(text).unwrap();
            let layout = case.layout();
            assert_eq!(parsed.layout.period(), layout.period(), "{text}");
            for x in -60..=60 {
                assert_eq!(
                    parsed.layout.slot_at(x),
                    layout.slot_at(x),
                    "{text} at x = {x}"
                );
            }
        }
    }

    #[test]
    fn pattern_with_general_coin() {
        let parsed = parse_pattern("G<0.5,0,0>1I2").unwrap();
        assert_eq!(parsed.custom.len(), 1);
        assert!(parsed.custom[0].max_diff(&CoinOperator::hadamard()) <= 1e-15);
        assert_eq!(parsed.layout.slot_at(0), CoinSlot::Custom(0));
        assert_eq!(parsed.layout.slot_at(1), CoinSlot::C0);
        let table = CoinTable::default().with_custom(parsed.custom.clone());
        parsed.layout.check_table(&table).unwrap();
        assert!(parsed.layout.check_table(&CoinTable::default()).is_err());

        let unicode = parse_pattern("G⟨1,1.5707963267948966,1.5707963267948966⟩3").unwrap();
        assert!(unicode.custom[0].max_diff(&CoinOperator::identity()) <= 1e-15);
        assert_eq!(unicode.layout.anchor(), 1);
    }

    #[test]
    fn malformed_patterns_are_rejected() {
        for bad in ["H", "H0", "X3", "G<0.5,0>2", "G<2,0,0>1", "G0.5", "H2I"] {
            assert!(parse_pattern(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn even_first_block_starts_at_origin() {
        let parsed = parse_pattern("H2I2").unwrap();
        assert_eq!(parsed.layout.anchor(), 0);
        assert_eq!(parsed.layout.slot_at(0), CoinSlot::Cp);
        assert_eq!(parsed.layout.slot_at(1), CoinSlot::Cp);
        assert_eq!(parsed.layout.slot_at(2), CoinSlot::C0);
    }

    fn arb_case() -> impl Strategy<Value = CaseSpec> {
        prop_oneof![
            (2u32..30).prop_map(|n| spec(CaseFamily::IA, n)),
            (2u32..30).prop_map(|n| spec(CaseFamily::IB, n)),
            (1u32..15).prop_map(|k| spec(CaseFamily::IIA, 2 * k)),
            (1u32..15).prop_map(|k| spec(CaseFamily::IIB, 2 * k)),
            (1u32..12).prop_map(|k| spec(CaseFamily::IIIA, 2 * k + 1)),
            (1u32..12).prop_map(|k| spec(CaseFamily::IIIB, 2 * k + 1)),
        ]
    }

    proptest! {
        #[test]
        fn layouts_are_periodic(case in arb_case(), x in -1000i64..=1000) {
            let l = case.layout();
            prop_assert_eq!(l.slot_at(x), l.slot_at(x + l.period() as i64));
        }

        #[test]
        fn duality_swaps_families(case in arb_case(), x in -200i64..=200) {
            let dual = CaseSpec::new(case.family().dual(), case.param()).unwrap();
            let table = CoinTable::default();
            let swapped = table.swapped();
            let here = case.layout().coin_at(&swapped, x).unwrap();
            let there = dual.layout().coin_at(&table, x).unwrap();
            prop_assert_eq!(here, there);
            prop_assert_eq!(case.layout().dual(), dual.layout());
        }

        #[test]
        fn case_layouts_are_reflection_symmetric(case in arb_case(), x in -500i64..=500) {
            let l = case.layout();
            prop_assert_eq!(l.slot_at(x), l.slot_at(-x));
        }

        #[test]
        fn minority_counts(case in arb_case(), start in -300i64..=300) {
            let l = case.layout();
            let n = l.period() as i64;
            let cp = (start..start + n).filter(|&x| l.slot_at(x) == CoinSlot::Cp).count();
            let c0 = n as usize - cp;
            let expect = match case.family() {
                CaseFamily::IA | CaseFamily::IIB => (1, n as usize - 1),
                CaseFamily::IB | CaseFamily::IIA => (n as usize - 1, 1),
                CaseFamily::IIIA | CaseFamily::IIIB => (case.param() as usize, case.param() as usize),
            };
            prop_assert_eq!((cp, c0), expect);
        }
    }
}
