#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "coxdl/variety.hpp"

namespace coxdl {

struct ClassFunction {
    const Group* G = nullptr;
    std::vector<Cyclotomic> values;   // per conjugacy class
    bool genuine = false;
};

Cyclotomic inner_product(const ClassFunction& a, const ClassFunction& b);

struct ExtractionReport {
    TorusChar theta;
    mpq_class cc;          // ⟨c, c⟩
    bool concentrated = false;
    long r = -1;
    int eps = 0;
    mpq_class lambda;      // ε q^{nr/2}
    bool sign_flipped = false;
    ClassFunction chi;
    long r_formula = -1;
    bool r_matches = false;
    std::string note;
};

// Which side the torus character is read on in the trace sum:
// c_θ(g) = 1/#T Σ_t θ(t)^{orientation} #S_{g,t}. Fixed by the GL_2 pin.
constexpr int kTorusOrientation = -1;

struct PipelineOptions {
    unsigned threads = 1;
    CountOptions count;
    // Optional cache lookup/store for (class, t) counts.
    std::function<std::optional<std::uint64_t>(std::size_t, std::uint64_t)> lookup;
    std::function<void(std::size_t, std::uint64_t, std::uint64_t)> store;
};

struct TableStats {
    std::uint64_t computed = 0, from_symmetry = 0, from_cache = 0, pruned = 0;
};

class Pipeline {
public:
    explicit Pipeline(const GroupSpec& spec, PipelineOptions opt = {});

    const GroupSpec& spec() const { return spec_; }
    const FieldTower& tower() const { return *tower_; }
    std::shared_ptr<const FieldTower> tower_ptr() const { return tower_; }
    const Group& group() const { return *G_; }
    const Torus& torus() const { return *T_; }
    const PointModel& model() const { return M_; }

    const SCountTable& table();
    const TableStats& stats() const { return stats_; }
    // Cache hooks need order_hash(), so options stay adjustable until table().
    PipelineOptions& options() { return opt_; }

    ClassFunction c_function(const TorusChar& th);
    ExtractionReport lambda_extract(const ClassFunction& c, const TorusChar& th) const;
    std::string order_hash() const;

private:
    GroupSpec spec_;
    PipelineOptions opt_;
    std::shared_ptr<FieldTower> tower_;
    std::unique_ptr<Group> G_;
    std::unique_ptr<Torus> T_;
    PointModel M_;
    std::optional<SCountTable> table_;
    TableStats stats_;
};

struct MackeyResult {
    std::vector<TorusChar> thetas;
    std::vector<std::vector<mpq_class>> measured;
    std::vector<std::vector<long>> predicted;
    std::vector<bool> extracted;
    bool pass = true;
};

long mackey_prediction(const TorusChar& a, const TorusChar& b);
MackeyResult mackey_matrix(Pipeline& P, const std::vector<TorusChar>& thetas);

struct Verdict {
    std::string name;
    bool pass = false;
    bool vacuous = false;
    std::string detail;
};

Verdict verify_degree(Pipeline& P, const ExtractionReport& rep);
Verdict verify_cuspidal(Pipeline& P, const ExtractionReport& rep, unsigned i0);
Verdict verify_very_regular(Pipeline& P, const ExtractionReport& rep);
Verdict verify_central(Pipeline& P, const ExtractionReport& rep);

// Textbook cuspidal character of GL_2(F_q) attached to θ on F_{q^2}^×.
ClassFunction classical_gl2_oracle(const Pipeline& P, const TorusChar& th);

}  // namespace coxdl
