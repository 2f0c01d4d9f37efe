#pragma once

#include "contactsym/rational.hpp"
#include "contactsym/poly.hpp"
#include "contactsym/diff_op.hpp"
#include "contactsym/linalg.hpp"
#include "contactsym/contact_core.hpp"
#include "contactsym/symbol_actions.hpp"
#include "contactsym/equivariant_ops.hpp"
#include "contactsym/casimir.hpp"
#include "contactsym/invariant_fields.hpp"
#include "contactsym/diophantine.hpp"
