/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const kinetic_half_moments: (a: number, b: number, c: number) => [number, number];
export const simulation_advance: (a: number, b: number) => [number, number, number];
export const simulation_bed: (a: number) => [number, number];
export const simulation_endTime: (a: number) => number;
export const simulation_energy: (a: number) => number;
export const simulation_fromPreset: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const simulation_fromToml: (a: number, b: number) => [number, number, number];
export const simulation_heights: (a: number) => [number, number];
export const simulation_layers: (a: number) => number;
export const simulation_mass: (a: number) => number;
export const simulation_time: (a: number) => number;
export const simulation_velocities: (a: number) => [number, number];
export const simulation_x: (a: number) => [number, number];
export const two_layer_eigenvalues: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
