//! Lookup tables defining the dependent variable `W` of the simulated sets.

const W_OF_X: [u32; 4] = [1, 3, 0, 2];

/// Indexed `[x][y]`.
const W_OF_XY: [[u32; 4]; 4] = [[1, 3, 2, 1], [3, 0, 0, 3], [2, 0, 1, 2], [1, 0, 3, 2]];

/// Indexed `[x][y][z]`.
const W_OF_XYZ: [[[u32; 4]; 4]; 4] = [
    [[3, 0, 0, 3], [0, 3, 0, 1], [0, 0, 0, 1], [3, 1, 1, 3]],
    [[0, 3, 0, 1], [3, 2, 0, 2], [0, 0, 1, 1], [1, 2, 1, 2]],
    [[0, 0, 0, 1], [0, 0, 1, 1], [0, 1, 1, 1], [1, 1, 1, 1]],
    [[3, 1, 1, 3], [1, 2, 1, 2], [1, 1, 1, 1], [3, 2, 1, 2]],
];

pub fn w_of_x(x: u32) -> u32 {
    W_OF_X[x as usize]
}

pub fn w_of_xy(x: u32, y: u32) -> u32 {
    W_OF_XY[x as usize][y as usize]
}

pub fn w_of_xyz(x: u32, y: u32, z: u32) -> u32 {
    W_OF_XYZ[x as usize][y as usize][z as usize]
}
