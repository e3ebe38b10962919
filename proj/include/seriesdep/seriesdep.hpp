#pragma once

#include "seriesdep/error_analysis.hpp"
#include "seriesdep/exception.hpp"
#include "seriesdep/measures.hpp"
#include "seriesdep/models.hpp"
#include "seriesdep/numerics.hpp"
#include "seriesdep/oracle.hpp"
