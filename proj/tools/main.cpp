#include "regidx/commands.hpp"

int main(int argc, char** argv) {
    return regidx::run_command(argc, argv);
}
