use clap::Parser;

use brakesync_cli::{run, Command};

/// Rust ignores SIGPIPE by default, so a downstream `head` closing the pipe
/// surfaces as a panic inside `println!`. Restore the default disposition so
/// truncated pipes end the process quietly, the way other filters behave.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() {
    reset_sigpipe();
    match Command::try_parse() {
        Ok(command) => std::process::exit(run(command)),
        Err(err) => {
            // Usage problems exit 1 like any other parse failure; help and
            // version requests are successes.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    }
}
