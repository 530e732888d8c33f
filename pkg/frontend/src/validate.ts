/** Client-side validation of the cycle entry form. Mirrors the service's
 * own checks so obviously bad input never produces a request; the server
 * remains the authority. */

import type { CycleRequest, FieldError } from "./types.js";

export function validateCycleForm(input: CycleRequest): FieldError[] {
  const errors: FieldError[] = [];
  if (!Number.isInteger(input.cycle_index) || input.cycle_index < 1) {
    errors.push({ field: "cycle_index", message: "cycle index must be a positive integer" });
  }
  if (!(input.dose_std >= 0)) {
    errors.push({ field: "dose_std", message: "dose must be zero or positive" });
  }
  if (!(input.w0 > 0)) {
    errors.push({ field: "w0", message: "pre-cycle count must be positive" });
  }
  if (input.times.length === 0) {
    errors.push({ field: "times", message: "at least one observation time is required" });
  }
  input.times.forEach((t, i) => {
    if (!(t > 0)) {
      errors.push({ field: `times.${i}`, message: "offsets must be positive" });
    } else if (i > 0 && !(t > input.times[i - 1]!)) {
      errors.push({ field: `times.${i}`, message: "offsets must be strictly increasing" });
    }
  });
  if (input.wbc.length !== input.times.length) {
    errors.push({ field: "wbc", message: "one count per observation time" });
  }
  input.wbc.forEach((w, i) => {
    if (!(w > 0)) {
      errors.push({ field: `wbc.${i}`, message: "counts must be positive" });
    }
  });
  return errors;
}

export function validatePlan(cycles: { cycle_index: number; dose_std: number; offsets: number[] }[]): FieldError[] {
  const errors: FieldError[] = [];
  cycles.forEach((c, ci) => {
    if (!(c.dose_std >= 0)) {
      errors.push({ field: `cycles.${ci}.dose_std`, message: "dose must be zero or positive" });
    }
    c.offsets.forEach((t, i) => {
      if (!(t > 0) || (i > 0 && !(t > c.offsets[i - 1]!))) {
        errors.push({ field: `cycles.${ci}.offsets.${i}`, message: "offsets must be positive and strictly increasing" });
      }
    });
    if (ci > 0 && c.cycle_index !== cycles[ci - 1]!.cycle_index + 1) {
      errors.push({ field: `cycles.${ci}.cycle_index`, message: "plan cycles must be contiguous" });
    }
  });
  return errors;
}
