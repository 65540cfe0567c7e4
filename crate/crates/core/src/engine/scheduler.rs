//! Work-stealing job runner.
//!
//! Every worker owns a LIFO deque, so it dives depth-first into its own
//! subtree. An idle worker first takes a root from the shared injector and
//! otherwise steals from the worker with the most queued jobs. Stealing takes
//! from the far end of a LIFO deque, which holds that worker's oldest and
//! therefore shallowest pending job.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Duration;

use crossbeam::deque::{Injector, Steal, Stealer, Worker};

/// Run `roots` and everything they spawn on `workers` threads.
///
/// `process` handles one job with its worker's private state and pushes any
/// child jobs into the vector it is given. Once `cancel` is set, queued jobs
/// are dropped without being processed. Returns the per-worker states.
pub(crate) fn run<J, S, I, F>(roots: Vec<J>, workers: usize, cancel: &AtomicBool, init: I, process: F) -> Vec<S>
where
    J: Send,
    S: Send,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, J, &mut Vec<J>) + Sync,
{
    let workers = workers.max(1);
    let injector = Injector::new();
    let pending = AtomicUsize::new(roots.len());
    for r in roots {
        injector.push(r);
    }
    let locals: Vec<Worker<J>> = (0..workers).map(|_| Worker::new_lifo()).collect();
    let stealers: Vec<Stealer<J>> = locals.iter().map(Worker::stealer).collect();

    std::thread::scope(|scope| {
        let handles: Vec<_> = locals
            .into_iter()
            .enumerate()
            .map(|(me, local)| {
                let (injector, stealers, pending) = (&injector, &stealers, &pending);
                let (init, process) = (&init, &process);
                scope.spawn(move || {
                    let mut state = init();
                    let mut children = Vec::new();
                    let mut idle = 0u32;
                    loop {
                        let Some(job) = find_job(me, &local, injector, stealers) else {
                            if pending.load(Ordering::Acquire) == 0 {
                                break;
                            }
                            backoff(&mut idle);
                            continue;
                        };
                        idle = 0;
                        if !cancel.load(Ordering::Acquire) {
                            process(&mut state, job, &mut children);
                            pending.fetch_add(children.len(), Ordering::AcqRel);
                            // first child ends up on top of the stack
                            for c in children.drain(..).rev() {
                                local.push(c);
                            }
                        }
                        pending.fetch_sub(1, Ordering::AcqRel);
                    }
                    state
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
            .collect()
    })
}

fn find_job<J>(me: usize, local: &Worker<J>, injector: &Injector<J>, stealers: &[Stealer<J>]) -> Option<J> {
    if let Some(j) = local.pop() {
        return Some(j);
    }
    loop {
        let mut retry = false;
        match injector.steal() {
            Steal::Success(j) => return Some(j),
            Steal::Retry => retry = true,
            Steal::Empty => {}
        }
        let victim = stealers
            .iter()
            .enumerate()
            .filter(|(i, s)| *i != me && !s.is_empty())
            .max_by_key(|(i, s)| (s.len(), std::cmp::Reverse(*i)));
        if let Some((_, s)) = victim {
            match s.steal() {
                Steal::Success(j) => return Some(j),
                Steal::Retry => retry = true,
                Steal::Empty => retry = true,
            }
        }
        if !retry {
            return None;
        }
    }
}

fn backoff(idle: &mut u32) {
    *idle += 1;
    if *idle < 64 {
        std::hint::spin_loop();
    } else if *idle < 256 {
        std::thread::yield_now();
    } else {
        std::thread::sleep(Duration::from_micros(50));
    }
}
