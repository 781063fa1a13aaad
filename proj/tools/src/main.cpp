#include "toricdef_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
	std::vector<std::string> args(argv + 1, argv + argc);
	return toricdef::cli::run(args, std::cin, std::cout, std::cerr);
}
