#pragma once

#include "vdmuml/model.hpp"
#include "vdmuml/puml_parser.hpp"
#include "vdmuml/puml_printer.hpp"
#include "vdmuml/result.hpp"
#include "vdmuml/transform.hpp"
#include "vdmuml/vdm_parser.hpp"
#include "vdmuml/vdm_printer.hpp"
#include "vdmuml/vdm_type.hpp"
