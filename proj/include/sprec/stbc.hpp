// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------
//
// Orthogonal space-time block codebooks. A codeword S is n_T x T: rows are transmit
// antennas, columns are symbol periods.

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sprec/types.hpp"

namespace sprec
{
    enum class Design
    {
        alamouti,
        rate34_3tx,
        rate34_4tx,
        real_orthogonal_4tx
    };

    enum class Normalization
    {
        unit_energy, // |c| = 1/sqrt(K), so S S^H = I
        printed      // unit-modulus symbols as listed for the alphabets, S S^H = K I
    };

    Design parse_design(const std::string &name);
    std::string to_string(Design d);

    int design_tx(Design d);
    int design_length(Design d);
    int design_symbols(Design d);

    /// Gray-labelled M-PSK. QPSK is offset by pi/4 so its points are (+-1 +-i)/sqrt(2).
    struct Constellation
    {
        std::vector<cplx> points;          // unit modulus
        std::vector<std::uint32_t> labels; // Gray label of each point
        int bits_per_symbol = 0;

        int size() const { return static_cast<int>(points.size()); }
    };

    Constellation make_psk(int order);

    /// Maps K symbols to the n_T x T design matrix.
    CMatrix design_matrix(Design d, const std::vector<cplx> &x);

    struct DistanceScan
    {
        double beta_min = 0.0;
        std::pair<int, int> argmin{0, 1};
        RMatrix table; // beta_{i,j}, zero diagonal
    };

    struct Codebook
    {
        Design design = Design::alamouti;
        Normalization normalization = Normalization::unit_energy;
        std::vector<CMatrix> codewords;
        std::vector<std::uint32_t> labels; // concatenated Gray labels, first symbol most significant
        std::vector<cplx> alphabet;        // scaled symbol alphabet
        int symbols = 0;                   // K
        int bits_per_codeword = 0;
        double gram_scale = 1.0;           // S S^H = gram_scale I
        double beta_min = 0.0;
        std::pair<int, int> beta_pair{0, 1};

        int size() const { return static_cast<int>(codewords.size()); }
        int n_tx() const { return static_cast<int>(codewords.front().rows()); }
        int length() const { return static_cast<int>(codewords.front().cols()); }
        bool square() const { return n_tx() == length(); }
    };

    /// Enumerates all |alphabet|^K codewords and verifies the orthogonality property.
    /// Throws PropertyError when a codeword or pair difference is not a scaled identity.
    Codebook build_codebook(Design design, const Constellation &constellation,
                            Normalization normalization = Normalization::unit_energy);

    /// beta_{i,j} from (S_i - S_j)(S_i - S_j)^H = beta_{i,j} I over all distinct pairs.
    DistanceScan codeword_distance_scan(const std::vector<CMatrix> &codewords);

    /// argmin_k ||Y - H_eff S_k||_F (E_s = 1), ties to the lowest index.
    int ml_decode_coherent(const CMatrix &y, const CMatrix &h_eff, const Codebook &book);

    /// argmax_k Re tr(Y_prev S_k Y_cur^H), ties to the lowest index.
    int diff_decode(const CMatrix &y_prev, const CMatrix &y_cur, const Codebook &book);

    class DiffState
    {
    public:
        static constexpr int renormalize_every = 512;

        explicit DiffState(int n_tx);

        /// X(k) = X(k-1) S. Throws UnsupportedDesign for non-square codewords.
        const CMatrix &encode(const CMatrix &s);

        const CMatrix &x() const { return x_; }
        long steps() const { return steps_; }

    private:
        CMatrix x_;
        long steps_ = 0;
    };

    /// Nearest unitary matrix (polar factor).
    CMatrix polar_unitary(const CMatrix &m);

    inline int bit_errors(const Codebook &book, int sent, int decided)
    {
        return std::popcount(book.labels[static_cast<size_t>(sent)] ^ book.labels[static_cast<size_t>(decided)]);
    }
} // namespace sprec
