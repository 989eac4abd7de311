#include "enverify/core_model.h"

#include <sstream>

namespace enverify {

BellLabel::BellLabel(int phase, int amplitude) : phase_bit(phase), amplitude_bit(amplitude) {
    if ((phase != 0 && phase != 1) || (amplitude != 0 && amplitude != 1)) {
        throw DomainError("Bell label bits must be 0 or 1");
    }
}

QuditBellLabel::QuditBellLabel(int d, int m, int n) : dimension(d), phase_index(m), amplitude_index(n) {
    if (d < 2) {
        throw DomainError("qudit dimension must be >= 2");
    }
    if (m < 0 || m >= d || n < 0 || n >= d) {
        throw DomainError("qudit Bell indices must lie in [0, d)");
    }
}

ErrorLabel ErrorLabel::general_shift(int s, int local_dim) {
    if (local_dim < 2 || s <= -local_dim || s >= local_dim) {
        throw DomainError("general shift must satisfy |s| < d");
    }
    return {ErrorClass::GeneralShift, s};
}

int ErrorLabel::amplitude_shift() const {
    switch (cls) {
        case ErrorClass::Type1:
            return 1;
        case ErrorClass::Type2:
            return -1;
        case ErrorClass::GeneralShift:
            return shift;
        default:
            return 0;
    }
}

std::string to_string(ErrorClass cls) {
    switch (cls) {
        case ErrorClass::Target:
            return "target";
        case ErrorClass::Type1:
            return "type1";
        case ErrorClass::Type2:
            return "type2";
        case ErrorClass::Type3:
            return "type3";
        case ErrorClass::GeneralShift:
            return "shift";
        case ErrorClass::Phase:
            return "phase";
    }
    return "?";
}

std::string to_string(const ErrorLabel &label) {
    if (label.cls == ErrorClass::GeneralShift) {
        return "shift(" + std::to_string(label.shift) + ")";
    }
    return to_string(label.cls);
}

NoiseModel NoiseModel::pure_target() {
    return NoiseModel(Kind::PureTarget, Rational(1), 2);
}

NoiseModel NoiseModel::rank2(const Rational &fidelity) {
    if (fidelity < 0 || fidelity > 1) {
        throw DomainError("rank-2 fidelity must lie in [0, 1]");
    }
    return NoiseModel(Kind::Rank2, fidelity, 2);
}

NoiseModel NoiseModel::werner(const Rational &fidelity) {
    if (fidelity < Rational(1, 4) || fidelity > 1) {
        throw DomainError("Werner fidelity must lie in [1/4, 1]");
    }
    return NoiseModel(Kind::Werner, fidelity, 2);
}

NoiseModel NoiseModel::isotropic_qudit(int d, const Rational &weight) {
    if (d < 2) {
        throw DomainError("isotropic dimension must be >= 2");
    }
    if (weight < 0 || weight > 1) {
        throw DomainError("isotropic weight must lie in [0, 1]");
    }
    return NoiseModel(Kind::IsotropicQudit, weight, d);
}

Rational NoiseModel::fidelity() const {
    switch (kind_) {
        case Kind::PureTarget:
            return 1;
        case Kind::Rank2:
        case Kind::Werner:
            return parameter_;
        case Kind::IsotropicQudit:
            return q_to_fidelity(parameter_, local_dim_);
    }
    return 0;
}

Rational NoiseModel::weight() const {
    switch (kind_) {
        case Kind::PureTarget:
            return 1;
        case Kind::Rank2:
            throw DomainError("rank-2 noise has no isotropic weight");
        case Kind::Werner:
            return fidelity_to_q(parameter_, 2);
        case Kind::IsotropicQudit:
            return parameter_;
    }
    return 0;
}

std::vector<std::pair<ErrorLabel, Rational>> NoiseModel::label_distribution() const {
    std::vector<std::pair<ErrorLabel, Rational>> out;
    auto add = [&](ErrorLabel label, const Rational &p) {
        if (p != 0) {
            out.emplace_back(label, p);
        }
    };
    switch (kind_) {
        case Kind::PureTarget:
            add(ErrorLabel::target(), 1);
            break;
        case Kind::Rank2:
            add(ErrorLabel::target(), parameter_);
            add(ErrorLabel::type1(), 1 - parameter_);
            break;
        case Kind::Werner: {
            auto p = werner_error_probs(parameter_);
            add(ErrorLabel::target(), p[0]);
            add(ErrorLabel::type1(), p[1]);
            add(ErrorLabel::type2(), p[2]);
            add(ErrorLabel::type3(), p[3]);
            break;
        }
        case Kind::IsotropicQudit: {
            for (const auto &[s, p] : shift_distribution()) {
                add(s == 0 ? ErrorLabel::target() : ErrorLabel::general_shift(s, local_dim_), p);
            }
            break;
        }
    }
    return out;
}

std::map<int, Rational> NoiseModel::shift_distribution() const {
    std::map<int, Rational> out;
    if (kind_ == Kind::IsotropicQudit) {
        // Computational diagonal: P(a, b) = q [a == b]/d + (1 - q)/d^2; shift a - b.
        int d = local_dim_;
        Rational d2(d * d);
        for (int s = -(d - 1); s <= d - 1; s++) {
            Rational p = Rational(d - std::abs(s)) * (1 - parameter_) / d2;
            if (s == 0) {
                p += parameter_;
            }
            if (p != 0) {
                out[s] = p;
            }
        }
        return out;
    }
    for (const auto &[label, p] : label_distribution()) {
        out[label.amplitude_shift()] += p;
    }
    return out;
}

std::string NoiseModel::name() const {
    std::ostringstream s;
    switch (kind_) {
        case Kind::PureTarget:
            return "pure";
        case Kind::Rank2:
            s << "rank2(" << parameter_.get_str() << ")";
            break;
        case Kind::Werner:
            s << "werner(" << parameter_.get_str() << ")";
            break;
        case Kind::IsotropicQudit:
            s << "isotropic(d=" << local_dim_ << ",q=" << parameter_.get_str() << ")";
            break;
    }
    return s.str();
}

EnsemblePromise::EnsemblePromise(int n_, Rational epsilon_, NoiseModel noise_)
    : n(n_), epsilon(std::move(epsilon_)), noise(std::move(noise_)) {
    if (n < 1) {
        throw DomainError("ensemble size must be >= 1");
    }
    if (epsilon <= 0 || epsilon > 1) {
        throw DomainError("promise gap must lie in (0, 1]");
    }
    if (noise.fidelity() > 1 - epsilon) {
        throw DomainError("noisy alternative violates F <= 1 - epsilon");
    }
}

template <class T>
std::array<T, 4> werner_error_probs(const T &fidelity) {
    if (fidelity < T(1) / 4 || fidelity > 1) {
        throw DomainError("Werner fidelity must lie in [1/4, 1]");
    }
    T e = (T(1) - fidelity) / 3;
    return {fidelity, e, e, e};
}

template <class T>
T fidelity_to_q(const T &fidelity, int d) {
    if (d < 2) {
        throw DomainError("dimension must be >= 2");
    }
    T d2 = Arith<T>::from_int(static_cast<long>(d) * d);
    if (fidelity * d2 < 1 || fidelity > 1) {
        throw DomainError("fidelity must lie in [1/d^2, 1]");
    }
    return (d2 * fidelity - 1) / (d2 - 1);
}

template <class T>
T q_to_fidelity(const T &weight, int d) {
    if (d < 2) {
        throw DomainError("dimension must be >= 2");
    }
    if (weight < 0 || weight > 1) {
        throw DomainError("weight must lie in [0, 1]");
    }
    T d2 = Arith<T>::from_int(static_cast<long>(d) * d);
    return (1 + (d2 - 1) * weight) / d2;
}

template std::array<double, 4> werner_error_probs(const double &);
template std::array<Rational, 4> werner_error_probs(const Rational &);
template double fidelity_to_q(const double &, int);
template Rational fidelity_to_q(const Rational &, int);
template double q_to_fidelity(const double &, int);
template Rational q_to_fidelity(const Rational &, int);

}  // namespace enverify
