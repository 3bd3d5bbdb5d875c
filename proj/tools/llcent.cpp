#include <iostream>

#include "llcent/cli_io.hpp"

int main(int argc, char** argv) {
    try {
        return llcent::cli_main(argc, argv, std::cout, std::cerr);
    } catch (const llcent::Error& e) {
        return llcent::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
}
