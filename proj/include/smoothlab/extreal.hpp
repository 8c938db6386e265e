#pragma once

#include <cmath>
#include <string>

#include "smoothlab/errors.hpp"

namespace smoothlab {

// Extended real: finite value, +inf, -inf, or indeterminate (inf - inf).
// "kappa exists" in the Theorem-2 sense means: not indeterminate, i.e. the
// positive and negative parts are not both infinite.
class ExtReal {
  public:
    enum class Kind { Finite, PosInf, NegInf, Indeterminate };

    ExtReal() : kind_(Kind::Finite), value_(0.0) {}

    static ExtReal finite(double v) {
        ExtReal r;
        r.kind_ = Kind::Finite;
        r.value_ = v;
        return r;
    }
    static ExtReal pos_inf() { return make(Kind::PosInf); }
    static ExtReal neg_inf() { return make(Kind::NegInf); }
    static ExtReal indeterminate() { return make(Kind::Indeterminate); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_indeterminate() const { return kind_ == Kind::Indeterminate; }
    bool exists() const { return kind_ != Kind::Indeterminate; }

    double value() const {
        if (kind_ != Kind::Finite) throw Error("ExtReal: value() on non-finite");
        return value_;
    }

    // Finite -> its value, infinities -> +-HUGE_VAL; throws on indeterminate.
    double as_double() const {
        switch (kind_) {
            case Kind::Finite: return value_;
            case Kind::PosInf: return HUGE_VAL;
            case Kind::NegInf: return -HUGE_VAL;
            default: throw Error("ExtReal: as_double() on indeterminate");
        }
    }

    ExtReal operator+(const ExtReal& o) const {
        if (is_indeterminate() || o.is_indeterminate()) return indeterminate();
        if (is_finite() && o.is_finite()) return finite(value_ + o.value_);
        if (is_finite()) return o;
        if (o.is_finite()) return *this;
        if (kind_ == o.kind_) return *this;
        return indeterminate();
    }

    ExtReal operator-() const {
        switch (kind_) {
            case Kind::Finite: return finite(-value_);
            case Kind::PosInf: return neg_inf();
            case Kind::NegInf: return pos_inf();
            default: return indeterminate();
        }
    }

    // Scale by a positive constant.
    ExtReal scaled(double c) const {
        if (kind_ == Kind::Finite) return finite(c * value_);
        return *this;
    }

    bool operator==(const ExtReal& o) const {
        if (kind_ != o.kind_) return false;
        return kind_ != Kind::Finite || value_ == o.value_;
    }

    std::string str() const {
        switch (kind_) {
            case Kind::Finite: return std::to_string(value_);
            case Kind::PosInf: return "inf";
            case Kind::NegInf: return "-inf";
            default: return "indeterminate";
        }
    }

  private:
    static ExtReal make(Kind k) {
        ExtReal r;
        r.kind_ = k;
        r.value_ = 0.0;
        return r;
    }

    Kind kind_;
    double value_;
};

}  // namespace smoothlab
