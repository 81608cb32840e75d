use std::io::IsTerminal;

fn main() {
    let color = std::env::var_os("NO_COLOR").is_none() && std::io::stderr().is_terminal();
    let code = mzi_gauss::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr(), color);
    std::process::exit(code);
}
