#include <iostream>

#include "dnalg/cli.hpp"

int main(int argc, char** argv)
{
	std::vector<std::string> args(argv + 1, argv + argc);
	const auto r = dnalg::cli::run_cli(args);
	std::cout << r.output;
	return r.exit_code;
}
