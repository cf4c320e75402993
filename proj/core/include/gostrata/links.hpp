#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gostrata/places.hpp"

namespace gos {

struct Band {
  int n = 1;
  Mask nodes = 0;
  bool operator==(const Band&) const = default;
};

// A link is encoded by the signed displacement of the curve leaving each source node.
struct Link {
  Band source;
  Band target;
  std::map<int, long> disp;
  bool operator==(const Link&) const = default;
};

struct LinkReport {
  bool ok = true;
  std::string violation;
  std::vector<std::string> warnings;
};

Band band_of(const ShimuraDatum& d, int prime);
LinkReport validate_link(const Link& l);
long total_displacement(const Link& l);
Link identity_link(const Band& b);
Link compose(const Link& l2, const Link& l1);
Link invert(const Link& l);
Link frobenius_link(const ShimuraDatum& d, int prime, long k);
bool turns_right(const Link& l);

enum class MorphismKind { PartialFrobenius, DeltaTau0, EtaTauMinusPlus, TrivialHecke, Induced, Composite };
const char* morphism_kind_name(MorphismKind k);
MorphismKind parse_morphism_kind(const std::string& s);

struct LinkMorphismDescriptor {
  Link link;
  long indentation = 0;
  MorphismKind note = MorphismKind::Composite;
  std::optional<long> degree_exponent;  // the morphism is finite flat of degree p^this
};

struct StandardParams {
  int prime = 0;
  int tau = 0;                // for DeltaTau0 this is tau_0
  int sheet = 0;              // DeltaTau0: sheet of the lift of tau_0 inside the lift of S
  std::optional<Mask> s_lift; // E-mask of the lift of S over this prime
};

LinkMorphismDescriptor standard_morphism(MorphismKind kind, const ShimuraDatum& d,
                                         const StandardParams& params);
LinkMorphismDescriptor compose(const LinkMorphismDescriptor& m2, const LinkMorphismDescriptor& m1);

struct InducedLink {
  Link link;
  long indentation = 0;
};

InducedLink induced_link(const Link& eta, const ShimuraDatum& d, ArchPlace tau, long indent_n);

std::string render_band_ascii(const Band& b);
std::string render_link_ascii(const Link& l);

}  // namespace gos
