#pragma once

#include <span>
#include <vector>

#include "mnls/field.hpp"

namespace mnls {

/// Unnormalized forward DFT of a field's values (FFTW sign convention -1).
std::vector<Complex> forward_transform(const ComponentField& u);
/// Inverse DFT scaled by 1/n so that inverse(forward(u)) == u.
ComponentField inverse_transform(const GridPtr& grid, std::vector<Complex> spectrum);

/// In-place transforms on raw buffers laid out per `grid`. These share the
/// calling thread's cached plans and are what the hot loops use.
void fft_forward_inplace(const GridSpec& grid, std::span<Complex> data);
void fft_inverse_inplace(const GridSpec& grid, std::span<Complex> data);

/// Spectral Laplacian: multiplies each mode by -|k|^2.
ComponentField laplacian(const ComponentField& u);
FieldVec laplacian(const FieldVec& u);

/// Kinetic pairing sum |k|^2 |u_k|^2 h^N / n, i.e. ||grad u||_2^2.
double kinetic(const ComponentField& u);

/// u(x + shift) by exact Fourier phase shift (periodic).
ComponentField translate(const ComponentField& u, std::span<const double> shift);
FieldVec translate(const FieldVec& u, std::span<const double> shift);

struct ResampleOptions {
  /// Largest tolerated tail mass fraction after dilation.
  double tail_tolerance = 1e-6;
  /// Width of the boundary shell, as a fraction of each half-length.
  double shell = 0.1;
};

/// lambda^exponent * U(lambda x) by band-limited trigonometric interpolation.
///
/// Exponent N/2 is the mass-preserving dilation; exponent 1/p is the
/// Pohozaev-preserving one. Nodes whose image lambda x leaves the box get
/// zero. Throws TailMassError when either the dilated field or the part of
/// U pushed outside the box carries more than `tail_tolerance` of the mass.
FieldVec resample_scaled(const FieldVec& u, double lambda, double exponent,
                         const ResampleOptions& options = {});

}  // namespace mnls
