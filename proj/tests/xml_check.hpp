#pragma once

#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace testing {

using boost::property_tree::ptree;

/// Throws boost::property_tree::xml_parser_error on malformed XML.
inline ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  ptree tree;
  boost::property_tree::read_xml(in, tree);
  return tree;
}

inline bool well_formed_xml(const std::string& text) {
  try {
    parse_xml(text);
    return true;
  } catch (const boost::property_tree::xml_parser_error&) {
    return false;
  }
}

/// Elements named `tag` anywhere below `node`; with `css_class`, only those
/// whose class attribute starts with it.
inline std::size_t count_elements(const ptree& node, const std::string& tag, const std::string& css_class = {}) {
  std::size_t n = 0;
  for (const auto& [name, child] : node) {
    if (name == tag) {
      const auto cls = child.get<std::string>("<xmlattr>.class", "");
      if (css_class.empty() || cls.rfind(css_class, 0) == 0) ++n;
    }
    if (name != "<xmlattr>") n += count_elements(child, tag, css_class);
  }
  return n;
}

}  // namespace testing
