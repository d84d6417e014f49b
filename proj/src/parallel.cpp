#include "hcspec/parallel.hpp"

namespace hcspec {

namespace {
std::atomic<int> g_jobs{1};
}

int default_jobs() { return g_jobs.load(); }
void set_default_jobs(int jobs) { g_jobs = std::max(1, jobs); }

}  // namespace hcspec
