//! Circuits as data: a flat gate list over numbered wires.
//!
//! Wires `0..inputs` are the circuit inputs; gate `k` drives wire
//! `inputs + k` and may only reference lower-numbered wires, so the gate
//! list is a topological order by construction.
//!
//! Boolean circuits use `Xor`/`And` (plus `Const`) and evaluate over rings
//! of characteristic two. Ring circuits use `Add`/`Sub`/`Mul`/`Pow`/`Const`
//! and evaluate over any ring; the boolean-to-ring rewrite lives in the
//! bridge compiler.
//!
//! Serialized form: `{"inputs": n, "gates": [{"id", "kind", "args"}, ...],
//! "outputs": [...]}` with `Const` carrying its value and `Pow` its exponent
//! as the second arg.

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::ring::Ring;
use crate::{Error, Result};

/// Index of an input or gate output.
pub type Wire = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Xor(Wire, Wire),
    And(Wire, Wire),
    Add(Wire, Wire),
    Sub(Wire, Wire),
    Mul(Wire, Wire),
    Pow(Wire, u64),
    Const(u64),
}

impl Gate {
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::Xor(..) => "xor",
            Gate::And(..) => "and",
            Gate::Add(..) => "add",
            Gate::Sub(..) => "sub",
            Gate::Mul(..) => "mul",
            Gate::Pow(..) => "pow",
            Gate::Const(..) => "const",
        }
    }

    fn wires(&self) -> Vec<Wire> {
        match *self {
            Gate::Xor(a, b)
            | Gate::And(a, b)
            | Gate::Add(a, b)
            | Gate::Sub(a, b)
            | Gate::Mul(a, b) => vec![a, b],
            Gate::Pow(a, _) => vec![a],
            Gate::Const(_) => vec![],
        }
    }
}

/// An acyclic circuit with designated output wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
}

impl Circuit {
    pub fn new(inputs: usize, gates: Vec<Gate>, outputs: Vec<Wire>) -> Result<Self> {
        let c = Circuit {
            inputs,
            gates,
            outputs,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        for (k, gate) in self.gates.iter().enumerate() {
            let id = self.inputs + k;
            for w in gate.wires() {
                if w >= id {
                    return Err(Error::Circuit(format!(
                        "gate {id} reads wire {w} that is not yet defined"
                    )));
                }
            }
        }
        let wire_count = self.inputs + self.gates.len();
        for &o in &self.outputs {
            if o >= wire_count {
                return Err(Error::Circuit(format!("output wire {o} does not exist")));
            }
        }
        if self.outputs.is_empty() {
            return Err(Error::Circuit("circuit has no outputs".into()));
        }
        Ok(())
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    /// True when every gate is `Xor`, `And` or a 0/1 `Const`.
    pub fn is_boolean(&self) -> bool {
        self.gates.iter().all(|g| match g {
            Gate::Xor(..) | Gate::And(..) => true,
            Gate::Const(v) => *v <= 1,
            _ => false,
        })
    }

    /// Same gates, single designated output.
    pub fn with_single_output(&self, index: usize) -> Result<Circuit> {
        let Some(&o) = self.outputs.get(index) else {
            return Err(Error::Circuit(format!("no output #{index}")));
        };
        Circuit::new(self.inputs, self.gates.clone(), vec![o])
    }
}

/// Incremental circuit construction; wires come back from each gate push.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    inputs: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(inputs: usize) -> Self {
        CircuitBuilder {
            inputs,
            gates: Vec::new(),
        }
    }

    pub fn input(&self, i: usize) -> Wire {
        assert!(i < self.inputs, "input {i} out of range");
        i
    }

    fn push(&mut self, gate: Gate) -> Wire {
        self.gates.push(gate);
        self.inputs + self.gates.len() - 1
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::Xor(a, b))
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::And(a, b))
    }

    pub fn add(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::Add(a, b))
    }

    pub fn sub(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::Sub(a, b))
    }

    pub fn mul(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::Mul(a, b))
    }

    pub fn pow(&mut self, a: Wire, exp: u64) -> Wire {
        self.push(Gate::Pow(a, exp))
    }

    pub fn constant(&mut self, v: u64) -> Wire {
        self.push(Gate::Const(v))
    }

    /// Boolean negation, `x xor 1`.
    pub fn not(&mut self, a: Wire) -> Wire {
        let one = self.constant(1);
        self.xor(a, one)
    }

    /// Balanced tree of a binary operation; `empty` is used for no operands.
    pub fn reduce(
        &mut self,
        mut wires: Vec<Wire>,
        mut op: impl FnMut(&mut Self, Wire, Wire) -> Wire,
        empty: impl FnOnce(&mut Self) -> Wire,
    ) -> Wire {
        if wires.is_empty() {
            return empty(self);
        }
        while wires.len() > 1 {
            let mut next = Vec::with_capacity(wires.len().div_ceil(2));
            for pair in wires.chunks(2) {
                next.push(if pair.len() == 2 {
                    op(self, pair[0], pair[1])
                } else {
                    pair[0]
                });
            }
            wires = next;
        }
        wires[0]
    }

    pub fn finish(self, outputs: Vec<Wire>) -> Result<Circuit> {
        Circuit::new(self.inputs, self.gates, outputs)
    }
}

/// Gate-by-gate reference evaluation over a ring.
///
/// `Xor`/`And` require characteristic two, where they coincide with
/// addition and multiplication; ring gates work everywhere. `Pow` is
/// evaluated by square and multiply.
pub fn eval_circuit_plain<R: Ring>(
    circuit: &Circuit,
    ring: &R,
    inputs: &[R::Elem],
) -> Result<Vec<R::Elem>> {
    if inputs.len() != circuit.inputs {
        return Err(Error::DimensionMismatch {
            expected: circuit.inputs,
            got: inputs.len(),
        });
    }
    let mut wires: Vec<R::Elem> = inputs.to_vec();
    for gate in &circuit.gates {
        let value = match *gate {
            Gate::Xor(a, b) => {
                if ring.characteristic() != 2 {
                    return Err(Error::UnsupportedGate { kind: "xor" });
                }
                ring.add(&wires[a], &wires[b])
            }
            Gate::And(a, b) => {
                if ring.characteristic() != 2 {
                    return Err(Error::UnsupportedGate { kind: "and" });
                }
                ring.mul(&wires[a], &wires[b])
            }
            Gate::Add(a, b) => ring.add(&wires[a], &wires[b]),
            Gate::Sub(a, b) => ring.sub(&wires[a], &wires[b]),
            Gate::Mul(a, b) => ring.mul(&wires[a], &wires[b]),
            Gate::Pow(a, exp) => pow_square_multiply(ring, &wires[a], exp),
            Gate::Const(v) => ring.lift(v),
        };
        wires.push(value);
    }
    Ok(circuit.outputs.iter().map(|&o| wires[o].clone()).collect())
}

/// Random circuit of `Xor`/`And`/`Const` gates; every gate reads wires
/// below it, so the result is always well formed. Meant for differential
/// testing against reference evaluators.
pub fn random_boolean_circuit(
    inputs: usize,
    gate_count: usize,
    rng: &mut dyn rand::RngCore,
) -> Circuit {
    use rand::Rng;
    assert!(inputs > 0 && gate_count > 0);
    let mut b = CircuitBuilder::new(inputs);
    let mut last = 0;
    for k in 0..gate_count {
        let upper = inputs + k;
        last = match rng.gen_range(0..5) {
            0 => b.constant(rng.gen_range(0..2)),
            1 | 2 => {
                let (x, y) = (rng.gen_range(0..upper), rng.gen_range(0..upper));
                b.xor(x, y)
            }
            _ => {
                let (x, y) = (rng.gen_range(0..upper), rng.gen_range(0..upper));
                b.and(x, y)
            }
        };
    }
    b.finish(vec![last]).expect("builder produces valid wiring")
}

/// Random circuit of ring gates with constants below `max_const` and small
/// exponents. Same wiring guarantees as [`random_boolean_circuit`].
pub fn random_ring_circuit(
    inputs: usize,
    gate_count: usize,
    max_const: u64,
    rng: &mut dyn rand::RngCore,
) -> Circuit {
    use rand::Rng;
    assert!(inputs > 0 && gate_count > 0);
    let mut b = CircuitBuilder::new(inputs);
    let mut last = 0;
    for k in 0..gate_count {
        let upper = inputs + k;
        last = match rng.gen_range(0..5) {
            0 => {
                let (x, y) = (rng.gen_range(0..upper), rng.gen_range(0..upper));
                b.add(x, y)
            }
            1 => {
                let (x, y) = (rng.gen_range(0..upper), rng.gen_range(0..upper));
                b.sub(x, y)
            }
            2 => {
                let (x, y) = (rng.gen_range(0..upper), rng.gen_range(0..upper));
                b.mul(x, y)
            }
            3 => {
                let x = rng.gen_range(0..upper);
                b.pow(x, rng.gen_range(0..5))
            }
            _ => b.constant(rng.gen_range(0..max_const.max(1))),
        };
    }
    b.finish(vec![last]).expect("builder produces valid wiring")
}

pub(crate) fn pow_square_multiply<R: Ring>(ring: &R, base: &R::Elem, exp: u64) -> R::Elem {
    let mut acc = ring.one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = ring.mul(&acc, &sq);
        }
        e >>= 1;
        if e > 0 {
            sq = ring.mul(&sq, &sq);
        }
    }
    acc
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    id: usize,
    kind: String,
    args: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct CircuitRepr {
    inputs: usize,
    gates: Vec<GateRecord>,
    outputs: Vec<usize>,
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let args = match *g {
                    Gate::Xor(a, b)
                    | Gate::And(a, b)
                    | Gate::Add(a, b)
                    | Gate::Sub(a, b)
                    | Gate::Mul(a, b) => vec![a as u64, b as u64],
                    Gate::Pow(a, e) => vec![a as u64, e],
                    Gate::Const(v) => vec![v],
                };
                GateRecord {
                    id: self.inputs + k,
                    kind: g.kind().to_string(),
                    args,
                }
            })
            .collect();
        CircuitRepr {
            inputs: self.inputs,
            gates,
            outputs: self.outputs.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = CircuitRepr::deserialize(de)?;
        let mut gates = Vec::with_capacity(repr.gates.len());
        for (k, rec) in repr.gates.iter().enumerate() {
            if rec.id != repr.inputs + k {
                return Err(de::Error::custom(format!(
                    "gate id {} out of order, expected {}",
                    rec.id,
                    repr.inputs + k
                )));
            }
            let wire = |i: usize| -> std::result::Result<Wire, D::Error> {
                rec.args
                    .get(i)
                    .map(|&v| v as usize)
                    .ok_or_else(|| de::Error::custom(format!("gate {} missing arg {i}", rec.id)))
            };
            let gate =
                match rec.kind.as_str() {
                    "xor" => Gate::Xor(wire(0)?, wire(1)?),
                    "and" => Gate::And(wire(0)?, wire(1)?),
                    "add" => Gate::Add(wire(0)?, wire(1)?),
                    "sub" => Gate::Sub(wire(0)?, wire(1)?),
                    "mul" => Gate::Mul(wire(0)?, wire(1)?),
                    "pow" => Gate::Pow(
                        wire(0)?,
                        *rec.args.get(1).ok_or_else(|| {
                            de::Error::custom(format!("gate {} missing exponent", rec.id))
                        })?,
                    ),
                    "const" => Gate::Const(*rec.args.first().ok_or_else(|| {
                        de::Error::custom(format!("gate {} missing value", rec.id))
                    })?),
                    other => return Err(de::Error::custom(format!("unknown gate kind {other:?}"))),
                };
            gates.push(gate);
        }
        Circuit::new(repr.inputs, gates, repr.outputs).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::super::ring::{Fp, F2};
    use super::*;

    #[test]
    fn xor_of_wire_with_itself_vanishes() {
        let mut b = CircuitBuilder::new(1);
        let out = b.xor(0, 0);
        let c = b.finish(vec![out]).unwrap();
        for x in 0..2u64 {
            assert_eq!(eval_circuit_plain(&c, &F2, &[x]).unwrap(), vec![0]);
        }
    }

    #[test]
    fn and_chain_of_ones() {
        let mut b = CircuitBuilder::new(8);
        let wires: Vec<Wire> = (0..8).collect();
        let out = b.reduce(wires, |b, x, y| b.and(x, y), |b| b.constant(1));
        let c = b.finish(vec![out]).unwrap();
        assert_eq!(eval_circuit_plain(&c, &F2, &[1; 8]).unwrap(), vec![1]);
        let mut inputs = [1u64; 8];
        inputs[5] = 0;
        assert_eq!(eval_circuit_plain(&c, &F2, &inputs).unwrap(), vec![0]);
    }

    #[test]
    fn ring_mode_xor_polynomial_over_z5() {
        // 2(x+y) - (x+y)^2 at x = y = 1 is 2*2 - 4 = 0
        let mut b = CircuitBuilder::new(2);
        let s = b.add(0, 1);
        let two = b.constant(2);
        let lhs = b.mul(two, s);
        let sq = b.mul(s, s);
        let out = b.sub(lhs, sq);
        let c = b.finish(vec![out]).unwrap();
        let f5 = Fp::new(5).unwrap();
        assert_eq!(eval_circuit_plain(&c, &f5, &[1, 1]).unwrap(), vec![0]);
        assert_eq!(eval_circuit_plain(&c, &f5, &[1, 0]).unwrap(), vec![1]);
        assert_eq!(eval_circuit_plain(&c, &f5, &[0, 0]).unwrap(), vec![0]);
    }

    #[test]
    fn boolean_gates_refuse_odd_characteristic() {
        let mut b = CircuitBuilder::new(2);
        let out = b.xor(0, 1);
        let c = b.finish(vec![out]).unwrap();
        let f5 = Fp::new(5).unwrap();
        assert!(matches!(
            eval_circuit_plain(&c, &f5, &[1, 1]),
            Err(Error::UnsupportedGate { .. })
        ));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f7 = Fp::new(7).unwrap();
        let mut b = CircuitBuilder::new(1);
        let out = b.pow(0, 6);
        let c = b.finish(vec![out]).unwrap();
        for x in 0..7u64 {
            let expected = (0..6).fold(1u64, |acc, _| acc * x % 7);
            assert_eq!(eval_circuit_plain(&c, &f7, &[x]).unwrap(), vec![expected]);
        }
    }

    #[test]
    fn forward_references_are_rejected() {
        assert!(Circuit::new(1, vec![Gate::Xor(0, 1)], vec![1]).is_err());
        assert!(Circuit::new(1, vec![Gate::Xor(0, 0)], vec![5]).is_err());
        assert!(Circuit::new(1, vec![], vec![]).is_err());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let mut b = CircuitBuilder::new(2);
        let out = b.xor(0, 1);
        let c = b.finish(vec![out]).unwrap();
        assert!(eval_circuit_plain(&c, &F2, &[1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut b = CircuitBuilder::new(2);
        let s = b.add(0, 1);
        let p = b.pow(s, 4);
        let k = b.constant(3);
        let out = b.sub(k, p);
        let c = b.finish(vec![out]).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: Circuit = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn json_rejects_unknown_kind() {
        let bad = r#"{"inputs":1,"gates":[{"id":1,"kind":"nand","args":[0,0]}],"outputs":[1]}"#;
        assert!(serde_json::from_str::<Circuit>(bad).is_err());
    }
}
