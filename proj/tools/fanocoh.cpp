#include "fanocoh/commands.hpp"

int main(int argc, char** argv)
{
    return fanocoh::cli::run(argc, argv);
}
