#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "delone/grid.hpp"
#include "delone/lattice.hpp"
#include "delone/palette.hpp"

namespace delone {

// The colouring Psi of Z^d glued together from the blocks s_N + R_1^{(N)},
// where R_1^{(N)} = [0, 2^{p_{N-1}+1})^d. A cell covered first by block N
// takes the value of colour 1 at level N+1, read at x - s_N.
class PsiField {
public:
    explicit PsiField(std::shared_ptr<PaletteEngine> engine, Int window_cap = Int{1} << 26);

    PaletteEngine& engine() const { return *engine_; }
    const LevelSchedule& schedule() const { return engine_->schedule(); }
    int d() const { return engine_->d(); }
    std::string hash() const { return engine_->hash(); }

    int max_cover_level() const { return schedule().n_max() + 1; }  // blocks exist up to here
    int max_psi_level() const { return schedule().n_max(); }        // Psi is readable up to here

    LatticePoint shift(int n) const;
    CubicSet cover_block(int n) const;  // s_n + R_1^{(n)}
    int minimal_cover_level(const LatticePoint& x) const;

    std::uint8_t psi(const LatticePoint& x) const;
    // phi_1^{(M+1)}(x - s_M) for a given M; the claim is that it does not depend on M.
    std::uint8_t psi_at_level(const LatticePoint& x, int m) const;

    // Row-major (first coordinate most significant) values over the cube.
    Grid psi_window(const CubicSet& box) const;

    // T_{n,j}: a cube on which Psi reads as colour j of level n.
    CubicSet locate_colour_patch(int n, long long j) const;

private:
    void fill(Grid& out, const CubicSet& window, int n, long long j, const LatticePoint& origin,
              const CubicSet& clip) const;

    std::shared_ptr<PaletteEngine> engine_;
    Int window_cap_;
};

struct NestingCheck {
    int level = 0;
    bool contained = true;   // block n inside block n+1 (when n+1 exists)
    bool growth = true;      // 3 * (max corner + 1) >= 2 * 2^{p_{n-1}}
    std::string detail;
};

std::vector<NestingCheck> nesting_checks(const PsiField& field);

}  // namespace delone
