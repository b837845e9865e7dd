use std::fmt;
use std::str::FromStr;

/// Names of reduction rules and program transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    Lbeta,
    CpIn,
    CpE,
    LletIn,
    LletE,
    Lapp,
    Lcase,
    Lseq,
    SeqC,
    SeqIn,
    SeqE,
    CaseC,
    CaseIn,
    CaseE,
    Gc1,
    Gc2,
    CpxIn,
    CpxE,
    CpcxIn,
    CpcxE,
    Abs,
    Abse,
    Xch,
    Ucp1,
    Ucp2,
    Ucp3,
    CaseCx,
    CaseStar,
    GcEq,
    CaseId,
    Cse,
    CpS,
    CpcxT,
    SeqInsert,
    Psi,
}

use RuleName::*;

impl RuleName {
    pub const ALL: [RuleName; 35] = [
        Lbeta, CpIn, CpE, LletIn, LletE, Lapp, Lcase, Lseq, SeqC, SeqIn, SeqE, CaseC, CaseIn, CaseE, Gc1, Gc2,
        CpxIn, CpxE, CpcxIn, CpcxE, Abs, Abse, Xch, Ucp1, Ucp2, Ucp3, CaseCx, CaseStar, GcEq, CaseId, Cse, CpS,
        CpcxT, SeqInsert, Psi,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Lbeta => "lbeta",
            CpIn => "cp-in",
            CpE => "cp-e",
            LletIn => "llet-in",
            LletE => "llet-e",
            Lapp => "lapp",
            Lcase => "lcase",
            Lseq => "lseq",
            SeqC => "seq-c",
            SeqIn => "seq-in",
            SeqE => "seq-e",
            CaseC => "case-c",
            CaseIn => "case-in",
            CaseE => "case-e",
            Gc1 => "gc1",
            Gc2 => "gc2",
            CpxIn => "cpx-in",
            CpxE => "cpx-e",
            CpcxIn => "cpcx-in",
            CpcxE => "cpcx-e",
            Abs => "abs",
            Abse => "abse",
            Xch => "xch",
            Ucp1 => "ucp1",
            Ucp2 => "ucp2",
            Ucp3 => "ucp3",
            CaseCx => "case-cx",
            CaseStar => "caseStar",
            GcEq => "gcEq",
            CaseId => "caseId",
            Cse => "cse",
            CpS => "cpS",
            CpcxT => "cpcxT",
            SeqInsert => "seqInsert",
            Psi => "psi",
        }
    }

    /// Rules the normal-order evaluator can fire.
    pub fn is_reduction(self) -> bool {
        matches!(
            self,
            Lbeta | CpIn | CpE | LletIn | LletE | Lapp | Lcase | Lseq | SeqC | SeqIn | SeqE | CaseC | CaseIn | CaseE
                | Gc1 | Gc2
        )
    }

    pub fn is_gc(self) -> bool {
        matches!(self, Gc1 | Gc2)
    }

    pub fn is_cp(self) -> bool {
        matches!(self, CpIn | CpE)
    }

    pub fn is_case(self) -> bool {
        matches!(self, CaseC | CaseIn | CaseE)
    }

    pub fn is_seq(self) -> bool {
        matches!(self, SeqC | SeqIn | SeqE)
    }

    pub fn is_lll(self) -> bool {
        matches!(self, LletIn | LletE | Lapp | Lcase | Lseq)
    }

    /// Counted by `rln`: (lbeta), (case) and (seq).
    pub fn counts_for_rln(self) -> bool {
        self == Lbeta || self.is_case() || self.is_seq()
    }

    /// Counted by `rln_LCSC`: additionally (cp).
    pub fn counts_for_lcsc(self) -> bool {
        self.counts_for_rln() || self.is_cp()
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule `{0}`")]
pub struct ParseRuleError(pub String);

impl FromStr for RuleName {
    type Err = ParseRuleError;

    fn from_str(s: &str) -> Result<RuleName, ParseRuleError> {
        RuleName::ALL.iter().copied().find(|r| r.token() == s).ok_or_else(|| ParseRuleError(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip_and_partition() {
        for r in RuleName::ALL {
            assert_eq!(r.token().parse::<RuleName>().unwrap(), r);
        }
        assert_eq!(RuleName::ALL.iter().filter(|r| r.is_reduction()).count(), 16);
        assert!(!CpS.is_reduction());
        assert!(CpIn.counts_for_lcsc() && !CpIn.counts_for_rln());
        assert!(!LletE.counts_for_lcsc());
    }
}
