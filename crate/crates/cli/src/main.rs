use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match frechet_approx_cli::run(std::env::args_os(), &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    std::process::exit(code);
}
