/* tslint:disable */
/* eslint-disable */

export class Simulation {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Takes up to `steps` steps without passing the scenario's end time.
     * Returns the number of steps taken.
     */
    advance(steps: number): number;
    bed(): Float64Array;
    endTime(): number;
    energy(): number;
    /**
     * Built-in scenario by name with the given resolution.
     */
    static fromPreset(name: string, cells: number, layers: number, order: number): Simulation;
    /**
     * Scenario from TOML text.
     */
    static fromToml(text: string): Simulation;
    heights(): Float64Array;
    layers(): number;
    mass(): number;
    time(): number;
    /**
     * Velocities, cell-major (`N` values per cell).
     */
    velocities(): Float64Array;
    x(): Float64Array;
}

/**
 * `[m0⁺, m1⁺, m2⁺, m0⁻, m1⁻, m2⁻]` of the kinetic density for height `h`,
 * velocity `u` and gravity `g`.
 */
export function kinetic_half_moments(h: number, u: number, g: number): Float64Array;

/**
 * Sorted roots of the two-layer characteristic polynomial; the interface
 * velocity is `u_interface`.
 */
export function two_layer_eigenvalues(h: number, u1: number, u2: number, l: number, u_interface: number, g: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly kinetic_half_moments: (a: number, b: number, c: number) => [number, number];
    readonly simulation_advance: (a: number, b: number) => [number, number, number];
    readonly simulation_bed: (a: number) => [number, number];
    readonly simulation_endTime: (a: number) => number;
    readonly simulation_energy: (a: number) => number;
    readonly simulation_fromPreset: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly simulation_fromToml: (a: number, b: number) => [number, number, number];
    readonly simulation_heights: (a: number) => [number, number];
    readonly simulation_layers: (a: number) => number;
    readonly simulation_mass: (a: number) => number;
    readonly simulation_time: (a: number) => number;
    readonly simulation_velocities: (a: number) => [number, number];
    readonly simulation_x: (a: number) => [number, number];
    readonly two_layer_eigenvalues: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
