//! Operation counting and hardware cost models.
//!
//! Counts follow the conventions of the algorithm tables: comparisons, sign
//! tests and bit-shifts are tallied as additions, and scaling by
//! `λ = 1 − 2⁻ᴾ` costs one addition and no multiplication.

use std::fmt;
use std::ops::{Add, AddAssign};

/// Arithmetic operations spent by one filter step (or any other unit of work).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCounts {
    pub mul: u64,
    pub add: u64,
    pub div: u64,
    pub sqrt: u64,
}

impl OpCounts {
    pub const ZERO: OpCounts = OpCounts::new(0, 0, 0, 0);

    pub const fn new(mul: u64, add: u64, div: u64, sqrt: u64) -> Self {
        Self { mul, add, div, sqrt }
    }

    pub const fn muls(mul: u64) -> Self {
        Self::new(mul, 0, 0, 0)
    }

    pub const fn adds(add: u64) -> Self {
        Self::new(0, add, 0, 0)
    }
}

impl Add for OpCounts {
    type Output = OpCounts;

    fn add(self, o: OpCounts) -> OpCounts {
        OpCounts::new(self.mul + o.mul, self.add + o.add, self.div + o.div, self.sqrt + o.sqrt)
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, o: OpCounts) {
        *self = *self + o;
    }
}

impl std::iter::Sum for OpCounts {
    fn sum<I: Iterator<Item = OpCounts>>(iter: I) -> OpCounts {
        iter.fold(OpCounts::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for OpCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mul={} add={} div={} sqrt={}", self.mul, self.add, self.div, self.sqrt)
    }
}

/// Algorithms covered by the closed-form complexity table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    DcdRtls,
    Aip,
    XRtls,
    KRtls,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::DcdRtls, Algo::Aip, Algo::XRtls, Algo::KRtls];

    pub fn name(self) -> &'static str {
        match self {
            Algo::DcdRtls => "dcd_rtls",
            Algo::Aip => "aip",
            Algo::XRtls => "xrtls",
            Algo::KRtls => "krtls",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Halves an integer that is known to be even. The non-shift rows carry
/// coefficients such as `0.5L²`; they are evaluated doubled and halved here.
fn halve(twice: u64) -> u64 {
    assert!(twice % 2 == 0, "operation count {twice}/2 is not integral");
    twice / 2
}

/// Per-iteration operation counts of the complexity table.
///
/// `n` and `m` are the DCD iteration and bit budgets; they are ignored by the
/// algorithms that do not use them.
pub fn predicted_ops(algo: Algo, l: u64, n: u64, m: u64, shift_structured: bool) -> OpCounts {
    let sq = l * l;
    match (algo, shift_structured) {
        (Algo::DcdRtls, true) => OpCounts::new(10 * l + 2, (4 * n + 17) * l + 2 * n + 2 * m, 1, 0),
        (Algo::Aip, true) => OpCounts::new(15 * l + 11, 12 * l + 5, 1, 0),
        (Algo::XRtls, true) => OpCounts::new(16 * l + 19, 13 * l + 5, 2, 1),
        (Algo::KRtls, true) => OpCounts::new(22 * l + 93, 19 * l + 47, 8, 2),
        (Algo::DcdRtls, false) => OpCounts::new(
            halve(sq + 19 * l + 4),
            sq + (4 * n + 16) * l + 2 * n + 2 * m,
            1,
            0,
        ),
        (Algo::Aip, false) => OpCounts::new(2 * sq + 9 * l + 9, halve(3 * sq + 13 * l + 10), 1, 0),
        (Algo::XRtls, false) => {
            OpCounts::new(2 * sq + 10 * l + 17, halve(3 * sq + 15 * l + 10), 2, 1)
        }
        (Algo::KRtls, false) => OpCounts::new(3 * sq + 10 * l + 31, 2 * sq + 6 * l + 13, 6, 2),
    }
}

/// Printed per-row costs of one DCD-RTLS iteration, in table order.
pub fn dcd_rtls_row_costs(l: u64, n: u64, m: u64, shift_structured: bool) -> Vec<(&'static str, OpCounts)> {
    let covariance = if shift_structured {
        OpCounts::new(l, 2 * l, 0, 0)
    } else {
        OpCounts::new(halve(l * l + l), l * l + l, 0, 0)
    };
    let solve = OpCounts::adds(2 * n * l + n + m);
    vec![
        ("phi", covariance),
        ("z", OpCounts::new(l, 2 * l, 0, 0)),
        ("tau", OpCounts::new(1, 2, 0, 0)),
        ("p1", OpCounts::new(2 * l, 3 * l, 0, 0)),
        ("p2", OpCounts::new(2 * l, 5 * l - 1, 0, 0)),
        ("solve1", solve),
        ("solve2", solve),
        ("m1", OpCounts::adds(l)),
        ("m2", OpCounts::adds(l)),
        ("k", OpCounts::new(l + 1, l, 0, 0)),
        ("w", OpCounts::new(3 * l, 2 * l - 1, 1, 0)),
    ]
}

/// Worst-case additions of one DCD solve with `n` updates and `m` bits.
pub fn dcd_add_budget(l: u64, n: u64, m: u64) -> u64 {
    2 * n * l + n + m
}

/// Unit-gate area model for fixed-point arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateModel {
    pub adder_gates: u64,
    pub multiplier_gates: u64,
    pub word_bits: u32,
}

impl Default for GateModel {
    fn default() -> Self {
        Self {
            adder_gates: 204,
            multiplier_gates: 2336,
            word_bits: 16,
        }
    }
}

/// Gate count of an operation mix. Divisions and square roots are priced as
/// multiplications.
pub fn gate_cost(c: &OpCounts, g: &GateModel) -> u64 {
    c.add * g.adder_gates + (c.mul + c.div + c.sqrt) * g.multiplier_gates
}

/// Operation counts measured on one or more instrumented DCD-RTLS steps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepCounts {
    pub total: OpCounts,
    /// Additions actually consumed inside the DCD solves.
    pub dcd_add_actual: u64,
    /// Worst-case additions the DCD solves were allowed.
    pub dcd_add_budget: u64,
}

impl Add for StepCounts {
    type Output = StepCounts;

    fn add(self, o: StepCounts) -> StepCounts {
        StepCounts {
            total: self.total + o.total,
            dcd_add_actual: self.dcd_add_actual + o.dcd_add_actual,
            dcd_add_budget: self.dcd_add_budget + o.dcd_add_budget,
        }
    }
}

impl AddAssign for StepCounts {
    fn add_assign(&mut self, o: StepCounts) {
        *self = *self + o;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldCheck {
    pub measured: u64,
    pub predicted: u64,
    pub ok: bool,
}

/// Measured versus predicted counts. Multiplications, divisions and square
/// roots must match exactly; additions must stay within the predicted budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterReport {
    pub mul: FieldCheck,
    pub add: FieldCheck,
    pub div: FieldCheck,
    pub sqrt: FieldCheck,
    pub dcd_add_actual: u64,
    pub dcd_add_budget: u64,
}

impl CounterReport {
    pub fn passed(&self) -> bool {
        self.mul.ok && self.add.ok && self.div.ok && self.sqrt.ok
    }
}

impl fmt::Display for CounterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |f: &mut fmt::Formatter<'_>, name: &str, c: &FieldCheck, rel: &str| {
            writeln!(
                f,
                "{name:<5} measured {:>6} {rel} predicted {:>6}  {}",
                c.measured,
                c.predicted,
                if c.ok { "ok" } else { "MISMATCH" }
            )
        };
        row(f, "mul", &self.mul, "==")?;
        row(f, "add", &self.add, "<=")?;
        row(f, "div", &self.div, "==")?;
        row(f, "sqrt", &self.sqrt, "==")?;
        write!(
            f,
            "dcd additions: actual {} of budget {}",
            self.dcd_add_actual, self.dcd_add_budget
        )
    }
}

pub fn verify_counters(measured: &StepCounts, predicted: &OpCounts) -> CounterReport {
    let exact = |m: u64, p: u64| FieldCheck { measured: m, predicted: p, ok: m == p };
    let t = &measured.total;
    CounterReport {
        mul: exact(t.mul, predicted.mul),
        add: FieldCheck {
            measured: t.add,
            predicted: predicted.add,
            ok: t.add <= predicted.add,
        },
        div: exact(t.div, predicted.div),
        sqrt: exact(t.sqrt, predicted.sqrt),
        dcd_add_actual: measured.dcd_add_actual,
        dcd_add_budget: measured.dcd_add_budget,
    }
}

/// One row of the complexity report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityRow {
    pub algo: Algo,
    pub l: u64,
    pub structured: bool,
    pub counts: OpCounts,
    pub gates: u64,
}

/// Predicted counts and gate costs for every algorithm and order in `orders`.
pub fn complexity_table(orders: &[u64], n: u64, m: u64, gates: &GateModel) -> Vec<ComplexityRow> {
    let mut rows = Vec::new();
    for structured in [true, false] {
        for &l in orders {
            for algo in Algo::ALL {
                let counts = predicted_ops(algo, l, n, m, structured);
                rows.push(ComplexityRow {
                    algo,
                    l,
                    structured,
                    counts,
                    gates: gate_cost(&counts, gates),
                });
            }
        }
    }
    rows
}

pub fn write_complexity_csv<W: std::io::Write>(out: &mut W, rows: &[ComplexityRow]) -> std::io::Result<()> {
    writeln!(out, "algo,L,structured,mul,add,div,sqrt,gates")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.algo, r.l, r.structured, r.counts.mul, r.counts.add, r.counts.div, r.counts.sqrt, r.gates
        )?;
    }
    Ok(())
}
