use himcf::monitors::{check_simons_sphere, residual_lemma_4_2, residual_lemma_4_5, TimeDerivative, FD_STEP};

fn main() -> himcf::Result<()> {
    println!("{:>2} {:>4} {:>5} {:>4}  {:>10} {:>10} {:>10} {:>10}", "n", "r0", "r1", "t", "metric", "metric fd", "H_tt", "H_tt fd");
    for n in [2, 3, 5] {
        for (r0, r1) in [(1.0, 0.0), (0.5, 0.5), (2.0, -0.2)] {
            for t in [0.0, 0.5, 1.0] {
                let fd = TimeDerivative::FiniteDifference(FD_STEP);
                println!(
                    "{n:>2} {r0:>4} {r1:>5} {t:>4}  {:>10.1e} {:>10.1e} {:>10.1e} {:>10.1e}",
                    residual_lemma_4_2(n, r0, r1, t, TimeDerivative::Exact)?,
                    residual_lemma_4_2(n, r0, r1, t, fd)?,
                    residual_lemma_4_5(n, r0, r1, t, TimeDerivative::Exact)?,
                    residual_lemma_4_5(n, r0, r1, t, fd)?,
                );
            }
        }
    }
    for (n, r) in [(2, 1.0), (5, 3.7), (5, 7.4)] {
        println!("Simons identity, n = {n}, r = {r}: {:.1e}", check_simons_sphere(n, r)?);
    }
    Ok(())
}
