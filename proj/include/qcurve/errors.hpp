#ifndef QCURVE_ERRORS_HPP
#define QCURVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcurve
{

// Malformed input, schema violations, bad flags. The CLI maps these to exit 1.
class input_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Mathematically out-of-domain requests. The CLI maps these to exit 2.
class domain_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class branch_error : public domain_error
{
public:
    using domain_error::domain_error;
};

class shape_error : public domain_error
{
public:
    using domain_error::domain_error;
};

class window_error : public domain_error
{
public:
    using domain_error::domain_error;
};

class leading_term_error : public domain_error
{
public:
    using domain_error::domain_error;
};

class normalization_error : public domain_error
{
public:
    using domain_error::domain_error;
};

class not_a_curve : public domain_error
{
public:
    using domain_error::domain_error;
};

class slope_error : public domain_error
{
public:
    using domain_error::domain_error;
};

} // namespace qcurve

#endif
