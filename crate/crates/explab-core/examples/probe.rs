use explab_core::bounds::{bound_sweep, master_bound};
use explab_core::channel::{ChannelPoint, Constellation};
use explab_core::diversity::{profile, DecayClass, ProfileOptions};
use explab_core::exponents::region_report;

fn main() {
    let bpsk = Constellation::psk(2).unwrap();
    let rate = 0.968 * std::f64::consts::LN_2;
    for db in [5.0, 6.0, 7.0, 8.0, 9.0, 10.0] {
        let eta = 10f64.powf(db / 10.0);
        let point = ChannelPoint::unit_energy(255, rate, eta).unwrap();
        let rep = region_report(&bpsk, &point).unwrap();
        let b = master_bound(&bpsk, &point).unwrap();
        println!(
            "BPSK {db:>4} dB eta {eta:8.4}: region {} rho* {:.4} pe {:.6e}  (r1max {:.4} rcrit {:.4} cap {:.4})",
            b.region, b.rho_opt, b.pe_capped, rep.r1_max, rep.r_crit, rep.capacity
        );
    }

    // Gaussian n=50 R=0.8 sweep, 0..25 dB
    let gauss = Constellation::gaussian();
    let grid: Vec<f64> = (0..=100).map(|k| 10f64.powf(0.25 * k as f64 / 10.0)).collect();
    let sweep = bound_sweep(&gauss, 50, 0.8, &grid).unwrap();
    let samples: Vec<(f64, f64)> = sweep
        .entries
        .iter()
        .map(|e| (e.eta, e.outcome.as_ref().unwrap().log_pe))
        .collect();
    let regions: Vec<u8> = sweep
        .entries
        .iter()
        .map(|e| e.outcome.as_ref().unwrap().region.index())
        .collect();
    let p = profile(&samples, &ProfileOptions::for_block_length(50)).unwrap();
    let mut counts = std::collections::BTreeMap::new();
    for (w, &class) in p.classes.iter().enumerate() {
        // window w covers slope indices w..w+7 -> sweep points w+1..w+8
        let rs = &regions[w + 1..w + 1 + 7];
        let uniform = rs.iter().all(|&r| r == rs[0]);
        let key = (if uniform { rs[0] } else { 0 }, class);
        *counts.entry(format!("region {:?} {:?}", key.0, key.1)).or_insert(0) += 1;
    }
    for (k, v) in counts {
        println!("gauss n=50 R=0.8: {k}: {v}");
    }
    println!("violations: {:?}", sweep.region_violations);

    // BPSK n=255 sweep high region 2
    let grid: Vec<f64> = (0..=22).map(|k| 10f64.powf((5.0 + 0.25 * k as f64) / 10.0)).collect();
    let sweep = bound_sweep(&bpsk, 255, rate, &grid).unwrap();
    let samples: Vec<(f64, f64)> = sweep.entries.iter().map(|e| (e.eta, e.outcome.as_ref().unwrap().log_pe)).collect();
    let regions: Vec<u8> = sweep.entries.iter().map(|e| e.outcome.as_ref().unwrap().region.index()).collect();
    let p = profile(&samples, &ProfileOptions::for_block_length(255)).unwrap();
    for (w, &class) in p.classes.iter().enumerate() {
        let rs = &regions[w + 1..w + 1 + 7];
        if rs.iter().all(|&r| r == 2) {
            let center_eta = p.etas[w + 3];
            println!("bpsk region2 window centered eta {:.3} ({:.2} dB): {:?}", center_eta, 10.0*center_eta.log10(), class);
        }
    }
}
