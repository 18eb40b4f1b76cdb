//! Workloads timed by the `pipeline` bench.

use gitfankit::gitfan::verify::{verify_fk_bridge, DEFAULT_SEED};
use gitfankit::gitfan::{delta_reduction, GitContext, PipelineFans};
use gitfankit::grassmann::enumerate_y_sets;
use gitfankit::semilattice::{criterion_sweep, face_poset};
use gitfankit::{Cone, Fan};

pub fn ysets(n: usize) -> usize {
    enumerate_y_sets(n).expect("within guard").len()
}

pub fn git_fan(n: usize) -> usize {
    GitContext::new(n).and_then(|c| c.git_fan()).expect("within guard").maximal_cones().len()
}

pub fn sigma_r(n: usize) -> usize {
    let ctx = GitContext::new(n).expect("within guard");
    PipelineFans::new(&ctx).expect("pipeline").sigma_r.maximal_cones().len()
}

pub fn delta(n: usize) -> usize {
    delta_reduction(n).expect("within guard").maximal_cones().len()
}

pub fn fk_bridge(samples: usize) -> bool {
    verify_fk_bridge(DEFAULT_SEED, samples).expect("sweep").result
}

pub fn criterion_on_orthant(d: usize) -> usize {
    let l = face_poset(&Fan::from_maximal(d, vec![Cone::orthant(d)]).expect("orthant fan"));
    criterion_sweep(&l).expect("sweep").instances
}
