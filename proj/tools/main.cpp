#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "chm/cli.hpp"

int main(int argc, char** argv) {
    try {
        return chm::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
