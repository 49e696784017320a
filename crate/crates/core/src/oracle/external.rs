use std::io::Write as _;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{OracleConfig, OracleKind, RunOutcome, TimeoutCause};
use crate::polysys::{serialize_problem, PolySystem, VariableOrdering};

const POLL: Duration = Duration::from_millis(2);

/// Runs the configured command for one ordering and times it by wall clock.
///
/// The problem is written to a temporary terms-format file. A nonzero exit,
/// a spawn failure, or running past the timeout all count as a timeout; in the
/// last case the child is killed.
pub fn external_run(cfg: &OracleConfig, p: &PolySystem, o: &VariableOrdering) -> RunOutcome {
    let OracleKind::External { command_template } = &cfg.kind else {
        panic!("external_run called with a non-external oracle");
    };
    let mut input = match tempfile::Builder::new().prefix("ordpick-").suffix(".txt").tempfile() {
        Ok(f) => f,
        Err(e) => return RunOutcome::Timeout(TimeoutCause::Spawn(e.to_string())),
    };
    if let Err(e) = writeln!(input, "{}", serialize_problem(p)).and_then(|_| input.flush()) {
        return RunOutcome::Timeout(TimeoutCause::Spawn(e.to_string()));
    }
    let path = input.path().to_string_lossy().into_owned();
    let ordering = o.to_string();
    let timeout = format!("{}", cfg.timeout_seconds);
    let argv: Vec<String> = command_template
        .split_whitespace()
        .map(|tok| tok.replace("{input}", &path).replace("{ordering}", &ordering).replace("{timeout}", &timeout))
        .collect();
    let Some((program, args)) = argv.split_first() else {
        return RunOutcome::Timeout(TimeoutCause::Spawn("empty command".into()));
    };

    let limit = Duration::from_secs_f64(cfg.timeout_seconds);
    let start = Instant::now();
    let mut child = match Command::new(program)
        .args(args)
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => {
            log::warn!("failed to spawn `{program}`: {e}");
            return RunOutcome::Timeout(TimeoutCause::Spawn(e.to_string()));
        }
    };
    loop {
        match child.try_wait() {
            Ok(Some(status)) => {
                let elapsed = start.elapsed();
                return if !status.success() {
                    RunOutcome::Timeout(TimeoutCause::NonzeroExit(status.code()))
                } else if elapsed > limit {
                    RunOutcome::Timeout(TimeoutCause::Overrun)
                } else {
                    RunOutcome::Completed(elapsed.as_secs_f64())
                };
            }
            Ok(None) if start.elapsed() > limit => {
                let _ = child.kill();
                let _ = child.wait();
                return RunOutcome::Timeout(TimeoutCause::Overrun);
            }
            Ok(None) => thread::sleep(POLL),
            Err(e) => {
                let _ = child.kill();
                let _ = child.wait();
                return RunOutcome::Timeout(TimeoutCause::Spawn(e.to_string()));
            }
        }
    }
}
