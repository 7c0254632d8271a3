// public class Fake {}
package com.rail;

/*
 * public interface AlsoFake { }
 */
interface Signal {
    int aspect();
    char OPEN = '{';
}
