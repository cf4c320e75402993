#pragma once

#include <optional>
#include <string>

#include "gostrata/dieudonne.hpp"
#include "gostrata/links.hpp"
#include "gostrata/picard.hpp"
#include "gostrata/places.hpp"
#include "gostrata/strata.hpp"
#include "gostrata/witt.hpp"

// JSON text in and out; field order is fixed so equal values give equal bytes.
namespace gos {

struct DatumFile {
  ShimuraDatum datum;
  std::optional<long> p;
  std::optional<std::vector<Mask>> s_lift_sheet;  // per prime, bit i = lift of i on sheet 1
};

DatumFile datum_from_json(const std::string& text);
std::string datum_to_json(const ShimuraDatum& d);

std::string descriptor_to_json(const ShimuraDatum& d, const StratumDescriptor& desc);
std::string lift_to_json(const ShimuraDatum& d, const LiftChoice& lift, const DeltaSets& delta);

Link link_from_json(const std::string& text);
std::string link_to_json(const Link& l);
std::string morphism_to_json(const LinkMorphismDescriptor& m, std::optional<long> p);

std::string ring_to_json(const WittRing& r);

struct PointFile {
  std::shared_ptr<const WittRing> ring;
  ShimuraDatum datum;
  Mask s_lift = 0;
  std::vector<Mat2> f_mats;
  std::vector<Mat2> pairings;
};

PointFile point_file_from_json(const std::string& text);
std::string point_to_json(const DieudonnePoint& pt);

std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

}  // namespace gos
