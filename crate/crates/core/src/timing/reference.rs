//! Published implementation results on the Zynq XC7Z020 (ZC702 board) at
//! 250 MHz, kept verbatim for reports. Nothing here is predicted.

/// Device totals for each resource column.
pub const DEVICE_SLICES: u32 = 106_400;
pub const DEVICE_LUT: u32 = 53_200;
pub const DEVICE_LUT_RAM: u32 = 17_400;
pub const DEVICE_BRAM: u32 = 140;
pub const DEVICE_DSP: u32 = 220;

pub const PUBLISHED_CLOCK_HZ: f64 = 2.5e8;

/// A resource count with the published utilisation percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Usage {
    pub count: u32,
    pub percent: u8,
}

const fn usage(count: u32, percent: u8) -> Usage {
    Usage { count, percent }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceRow {
    pub model: &'static str,
    pub slices: Usage,
    pub lut: Usage,
    pub lut_ram: Usage,
    pub bram: Usage,
    pub dsp: Usage,
    pub power_w: f64,
}

pub const RESOURCE_TABLE: [ResourceRow; 3] = [
    ResourceRow {
        model: "model 1",
        slices: usage(10874, 10),
        lut: usage(7218, 14),
        lut_ram: usage(874, 5),
        bram: usage(48, 34),
        dsp: usage(5, 2),
        power_w: 2.06,
    },
    ResourceRow {
        model: "model 2",
        slices: usage(30006, 28),
        lut: usage(17506, 33),
        lut_ram: usage(2873, 17),
        bram: usage(48, 34),
        dsp: usage(5, 2),
        power_w: 2.65,
    },
    ResourceRow {
        model: "cascaded model",
        slices: usage(4304, 4),
        lut: usage(3414, 6),
        lut_ram: usage(215, 1),
        bram: usage(2, 1),
        dsp: usage(10, 5),
        power_w: 1.74,
    },
];

/// Table of resource utilisation and power for the three implementations.
pub fn published_resource_table() -> &'static [ResourceRow; 3] {
    &RESOURCE_TABLE
}

/// Published timing for one implementation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedTiming {
    pub model: &'static str,
    /// Support vectors per stage.
    pub n_sv: &'static [usize],
    pub n_features: usize,
    pub accelerator_us: f64,
    pub accelerator_cycles: Option<u64>,
    pub processor_us: Option<f64>,
    pub processor_cycles: Option<u64>,
    /// Acceleration factor as printed (rounded).
    pub speedup: u32,
}

pub const PUBLISHED_TIMINGS: [PublishedTiming; 3] = [
    PublishedTiming {
        model: "model 1",
        n_sv: &[61],
        n_features: 27,
        accelerator_us: 11.46,
        accelerator_cycles: Some(2865),
        processor_us: Some(309.36),
        processor_cycles: Some(77340),
        speedup: 26,
    },
    PublishedTiming {
        model: "model 2",
        n_sv: &[248],
        n_features: 27,
        accelerator_us: 39.3,
        accelerator_cycles: None,
        processor_us: Some(1240.0),
        processor_cycles: None,
        speedup: 32,
    },
    PublishedTiming {
        model: "cascaded model",
        n_sv: &[61, 139],
        n_features: 27,
        accelerator_us: 1.8,
        accelerator_cycles: None,
        processor_us: None,
        processor_cycles: None,
        speedup: 5,
    },
];

/// HLS synthesis latency of the 248 x 27 IP before and after loop pipelining.
pub const HLS_SEQUENTIAL_CYCLES_248X27: u64 = 67_294;
pub const HLS_PIPELINED_CYCLES_248X27: u64 = 8091;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resource_rows() {
        let t = published_resource_table();
        assert_eq!(
            t[0].bram,
            Usage {
                count: 48,
                percent: 34
            }
        );
        assert_eq!(t[0].power_w, 2.06);
        assert_eq!(t[1].power_w, 2.65);
        assert_eq!(
            t[2].dsp,
            Usage {
                count: 10,
                percent: 5
            }
        );
        assert_eq!(t[2].power_w, 1.74);
    }

    #[test]
    fn percentages_consistent_with_device_totals() {
        for row in published_resource_table() {
            for (u, total) in [
                (row.slices, DEVICE_SLICES),
                (row.lut, DEVICE_LUT),
                (row.lut_ram, DEVICE_LUT_RAM),
                (row.bram, DEVICE_BRAM),
                (row.dsp, DEVICE_DSP),
            ] {
                let exact = 100.0 * f64::from(u.count) / f64::from(total);
                assert!(
                    (exact - f64::from(u.percent)).abs() < 1.0,
                    "{} {exact}",
                    row.model
                );
            }
        }
    }

    #[test]
    fn published_cycles_match_times() {
        for t in PUBLISHED_TIMINGS {
            if let Some(c) = t.accelerator_cycles {
                assert!((c as f64 / PUBLISHED_CLOCK_HZ * 1e6 - t.accelerator_us).abs() < 1e-9);
            }
            if let (Some(c), Some(us)) = (t.processor_cycles, t.processor_us) {
                assert!((c as f64 / PUBLISHED_CLOCK_HZ * 1e6 - us).abs() < 1e-9);
            }
        }
    }
}
