// scratch probe, deleted before release
use ddcomb::dispersion::find_bands;
use ddcomb::params::DimensionlessConfig;
use ddcomb::surface::{find_surface_states, Method, SearchOptions};

fn main() {
    // gap-2 occupancy at N=3 for deeper walls, across the sweep range
    for u in [60.0, 80.0, 100.0, 150.0] {
        let mut ok = true;
        for beta in [0.0, 0.1, 0.25, 0.4, 0.5] {
            let cb = DimensionlessConfig::symmetric(3, 1.0, beta, u).unwrap();
            let bb = find_bands(&cb, u, 4000).unwrap();
            let st =
                find_surface_states(&cb, &bb, Method::Classical, &SearchOptions::default())
                    .unwrap();
            let g2 = st.iter().filter(|s| s.gap_index == 2).count();
            if g2 == 0 {
                ok = false;
                println!("N=3 u={u}: beta={beta} gap2 EMPTY");
            }
        }
        println!("N=3 u={u}: gap2 occupied across sweep = {ok}");
    }

    // N=5, u=50: both gaps across the full sweep?
    for n in [5usize, 6] {
        let mut all_ok = [true, true];
        for i in 0..=20 {
            let beta = -0.5 + i as f64 / 20.0;
            let cb = DimensionlessConfig::symmetric(n, 1.0, beta, 50.0).unwrap();
            let bb = find_bands(&cb, 50.0, 4000).unwrap();
            let st =
                find_surface_states(&cb, &bb, Method::Classical, &SearchOptions::default())
                    .unwrap();
            for gap in [1usize, 2] {
                if !st.iter().any(|s| s.gap_index == gap) {
                    all_ok[gap - 1] = false;
                    println!("N={n}: beta={beta:.2} gap{gap} empty");
                }
            }
        }
        println!("N={n} u=50: gap1 full={} gap2 full={}", all_ok[0], all_ok[1]);
    }

    // pair midpoint drift vs N near the first-gap state (p=1, beta=0, u=50)
    let window_lo: f64 = 9.20;
    let window_hi: f64 = 9.35;
    let mut prev_mid: Option<f64> = None;
    for n in 38..=50usize {
        let cb = DimensionlessConfig::symmetric(n, 1.0, 0.0, 50.0).unwrap();
        let bb = find_bands(&cb, 50.0, 4000).unwrap();
        let gap1 = bb.gaps[0];
        let lo = window_lo.max(gap1.lo);
        let hi = window_hi.min(gap1.hi);
        let f = |eps: f64| {
            let e = ddcomb::EnergyPoint::with_wall(eps, 50.0).ok()?;
            ddcomb::classical_residual(&e, &cb).ok()
        };
        let roots = ddcomb::numerics::bracket_and_bisect(f, lo, hi, 400_000, 1e-13).unwrap();
        let eps: Vec<f64> = roots.iter().map(|r| r.refined).collect();
        let mid = match eps.len() {
            1 => eps[0],
            2 => 0.5 * (eps[0] + eps[1]),
            _ => {
                println!("N={n}: {} roots {:?}", eps.len(), eps);
                continue;
            }
        };
        let drift = prev_mid.map(|p| (mid - p).abs());
        println!("N={n}: roots={:?} mid={mid:.12} drift={drift:?}", eps);
        prev_mid = Some(mid);
    }
}
