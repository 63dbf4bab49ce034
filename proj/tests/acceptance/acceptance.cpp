// Acceptance runner: `acceptance <id>` runs one criterion and prints a
// single PASS/FAIL line. Criterion 12 runs the CLI selftest twice, once
// single-threaded and once with the default worker count, and compares
// every CSV byte for byte.
#include "morrey/selftest.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int determinism()
{
    const fs::path base = fs::temp_directory_path() / "morrey_acceptance_12";
    fs::remove_all(base);
    const fs::path one = base / "threads1", many = base / "default";
    const std::string cli = MORREY_CLI_PATH;
    // The selftest exit status reflects the criteria themselves; only the files matter here.
    const std::string a = "MORREY_THREADS=1 \"" + cli + "\" selftest --seed 1 --out \"" + one.string() + "\" > /dev/null";
    const std::string b = "env -u MORREY_THREADS \"" + cli + "\" selftest --seed 1 --out \"" + many.string() + "\" > /dev/null";
    const int ra = std::system(a.c_str()), rb = std::system(b.c_str());
    if (ra == -1 || rb == -1) {
        std::cout << "FAIL 12 deterministic output: could not launch " << cli << '\n';
        return 1;
    }
    std::size_t files = 0;
    std::string mismatch;
    if (fs::exists(one))
        for (const auto& e : fs::directory_iterator(one)) {
            if (e.path().extension() != ".csv") continue;
            ++files;
            const fs::path other = many / e.path().filename();
            if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
                if (mismatch.empty()) mismatch = e.path().filename().string();
            }
        }
    const bool pass = files == morrey::criterion_ids().size() + 1 && mismatch.empty();
    std::cout << (pass ? "PASS" : "FAIL") << " 12 deterministic output: " << files << " CSV files compared";
    if (!mismatch.empty()) std::cout << ", first mismatch " << mismatch;
    std::cout << '\n';
    fs::remove_all(base);
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::cerr << "usage: acceptance <criterion id>\n";
        return 2;
    }
    const std::string id = argv[1];
    if (id == "12") return determinism();
    try {
        const morrey::CriterionResult r = morrey::run_criterion(id, 1);
        std::cout << (r.pass ? "PASS" : "FAIL") << ' ' << r.id << ' ' << r.name << ": " << r.detail << '\n';
        return r.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cout << "FAIL " << id << " error: " << e.what() << '\n';
        return 1;
    }
}
