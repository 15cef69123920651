//! Software model of the SoC around the IP: three BRAM banks filled from the
//! data files, the processor-driven run, and the timer.
//!
//! The timer is the calibrated [`timing`](crate::timing) model; the harness
//! never produces cycle counts of its own. Each bank occupies whole BRAM
//! blocks and blocks are never shared between banks.

use crate::cascade::{cascade_classify, CascadeModel, CascadeResult};
use crate::engine::{classify_full, BlockTrace};
use crate::error::{ParseError, ParseErrorKind, Result, SvmError};
use crate::io::soc::{assemble, check_geometry, read_stream, StreamImage};
use crate::model::{Decision, TestInstance};
use crate::timing::{
    estimate_cascade_cycles, estimate_cycles, CalibrationProfile, LatencyEstimate,
};

/// BRAM resources of the target device.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeviceBudget {
    pub total_bram_blocks: usize,
    pub bits_per_block: usize,
}

impl Default for DeviceBudget {
    /// 140 blocks of 36 Kb (XC7Z020).
    fn default() -> Self {
        DeviceBudget {
            total_bram_blocks: 140,
            bits_per_block: 36 * 1024,
        }
    }
}

impl DeviceBudget {
    /// Whole blocks needed to hold `words` 32-bit words.
    pub fn blocks_for_words(&self, words: usize) -> usize {
        let bits = words as u128 * 32;
        bits.div_ceil(self.bits_per_block as u128) as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BramBank {
    pub name: &'static str,
    /// Array geometry from the stream header.
    pub rows: usize,
    pub cols: usize,
    pub capacity_bits: usize,
    pub words: Vec<f32>,
}

impl BramBank {
    fn from_stream(name: &'static str, image: StreamImage, budget: &DeviceBudget) -> Self {
        let blocks = budget.blocks_for_words(image.words.len());
        BramBank {
            name,
            rows: image.rows,
            cols: image.cols,
            capacity_bits: blocks * budget.bits_per_block,
            words: image.words,
        }
    }

    pub fn blocks(&self, budget: &DeviceBudget) -> usize {
        self.capacity_bits / budget.bits_per_block
    }

    fn image(&self) -> StreamImage {
        StreamImage {
            rows: self.rows,
            cols: self.cols,
            words: self.words.clone(),
        }
    }
}

/// The three banks wired to the IP's `SVs`, `Parameters` and `X` ports.
#[derive(Debug, Clone, PartialEq)]
pub struct BankSet {
    pub svs: BramBank,
    pub parameters: BramBank,
    pub x: BramBank,
    pub budget: DeviceBudget,
}

impl BankSet {
    pub fn blocks_used(&self) -> usize {
        [&self.svs, &self.parameters, &self.x]
            .iter()
            .map(|b| b.blocks(&self.budget))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Single {
        decision: Decision,
        trace: BlockTrace,
    },
    Cascade(CascadeResult),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub outcome: RunOutcome,
    pub measured_cycles: LatencyEstimate,
    pub bram_blocks_used: usize,
}

fn tag(name: &'static str, e: ParseError) -> ParseError {
    ParseError {
        location: e.location,
        kind: ParseErrorKind::Malformed(format!("{name} stream: {}", e.kind)),
    }
}

/// Parses the three data files into banks and checks the BRAM budget.
pub fn load_banks(
    svs: &[u8],
    parameters: &[u8],
    x: &[u8],
    budget: DeviceBudget,
) -> Result<BankSet> {
    let svs = read_stream(svs).map_err(|e| tag("svs", e))?;
    let parameters = read_stream(parameters).map_err(|e| tag("parameters", e))?;
    let x = read_stream(x).map_err(|e| tag("x", e))?;
    let banks = BankSet {
        svs: BramBank::from_stream("svs", svs, &budget),
        parameters: BramBank::from_stream("parameters", parameters, &budget),
        x: BramBank::from_stream("x", x, &budget),
        budget,
    };
    let required = banks.blocks_used();
    if required > budget.total_bram_blocks {
        return Err(SvmError::BramOverflow {
            required,
            available: budget.total_bram_blocks,
        });
    }
    Ok(banks)
}

/// Runs the full IP over loaded banks and reads the timer.
pub fn run_soc(banks: &BankSet, profile: &CalibrationProfile, threshold: f32) -> Result<RunRecord> {
    let (svs, parameters, x) = (banks.svs.image(), banks.parameters.image(), banks.x.image());
    if check_geometry(&svs, &parameters, &x).is_err() {
        let (n, f) = (svs.rows, svs.cols);
        return Err(if parameters.rows != n + 1 || parameters.cols != 1 {
            SvmError::mismatch("parameters bank", n + 1, parameters.words.len())
        } else {
            SvmError::mismatch("x bank", f, x.words.len())
        });
    }
    let (model, instance) = assemble(&svs, &parameters, &x, threshold)?;
    let (decision, trace) = classify_full(&model, &instance)?;
    Ok(RunRecord {
        outcome: RunOutcome::Single { decision, trace },
        measured_cycles: estimate_cycles(profile, model.num_sv, model.num_features),
        bram_blocks_used: banks.blocks_used(),
    })
}

/// Runs a cascade of simplified IPs. `x` arrives over the control bus, so
/// only each stage's internal `z` memory occupies BRAM.
pub fn run_cascade_soc(
    cm: &CascadeModel,
    x: &TestInstance,
    profile: &CalibrationProfile,
    budget: DeviceBudget,
) -> Result<RunRecord> {
    let bram_blocks_used: usize = cm
        .stages()
        .iter()
        .map(|s| budget.blocks_for_words(s.num_features()))
        .sum();
    if bram_blocks_used > budget.total_bram_blocks {
        return Err(SvmError::BramOverflow {
            required: bram_blocks_used,
            available: budget.total_bram_blocks,
        });
    }
    let result = cascade_classify(cm, x)?;
    let features: Vec<usize> = cm.stages().iter().map(|s| s.num_features()).collect();
    let measured_cycles =
        estimate_cascade_cycles(profile, &features, result.stage_decisions.len())?;
    Ok(RunRecord {
        outcome: RunOutcome::Cascade(result),
        measured_cycles,
        bram_blocks_used,
    })
}
