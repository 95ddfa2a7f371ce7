#include "commands.hpp"

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
    try {
        return predacgan::cli::run({argv + 1, argv + argc});
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
