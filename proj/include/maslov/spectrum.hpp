#pragma once

#include <string>
#include <vector>

#include "maslov/angle.hpp"
#include "maslov/matrix.hpp"

namespace maslov {

struct SpectrumEntry {
  AngleOverPi angle;  // ratio 2 encodes the eigenvalue 1
  int multiplicity = 0;
};

// Unit-circle part of a symplectic spectrum with algebraic multiplicities.
// Entries are sorted with the eigenvalue 1 first (it sits at angle 0), then
// ascending in the angle; conjugate angles theta and 2*pi - theta always
// carry equal multiplicities.
struct CircleSpectrum {
  std::vector<SpectrumEntry> entries;

  int total_multiplicity() const;
  int multiplicity_near(const AngleOverPi& angle, double tol = 1e-9) const;
  bool contains_minus_one() const;
  std::string to_string() const;
};

// Algebraic unit-circle spectrum. Exact for rational entries (cyclotomic
// candidate division plus Sturm counts on the x + 1/x transform, order up to
// 16); eigensolver-based for float entries, where a modulus within
// (1e-9, 1e-7) of 1 is reported as an error rather than silently classified.
CircleSpectrum circle_spectrum(const SymplecticMatrix& m);

// Total algebraic multiplicity on the unit circle.
int elliptic_height(const SymplecticMatrix& m);

// Complex geometric multiplicity of the eigenvalue exp(i*pi*ratio). Exact
// for rational matrices with rational angle ratios; quadratic ratios cannot
// be eigenvalue angles of a rational matrix and give 0; float queries use
// the numerical kernel.
int nu_omega(const SymplecticMatrix& m, const AngleOverPi& omega);

// Order of exp(i*pi*(p/q)) as a root of unity.
long root_of_unity_order(const Rational& ratio);

}  // namespace maslov
