#pragma once

#include <memory>
#include <string>

namespace egd {

/// Polynomial expressions in x (and z) for initial-condition pdfs:
/// numbers, + - *, integer powers with ^, parentheses. No division. Example:
/// "x^2", "1 + 0.5*x*z", "(1 - x)^3".
class PdfExpr {
public:
    static PdfExpr parse(const std::string& source);

    double eval(double x, double z = 0.0) const;
    bool uses_z() const { return uses_z_; }
    const std::string& source() const { return source_; }

    PdfExpr(const PdfExpr&);
    PdfExpr(PdfExpr&&) noexcept;
    PdfExpr& operator=(PdfExpr);
    ~PdfExpr();

    struct Node;

private:
    PdfExpr(std::shared_ptr<const Node> root, bool uses_z, std::string source);

    std::shared_ptr<const Node> root_;
    bool uses_z_ = false;
    std::string source_;
};

}  // namespace egd
